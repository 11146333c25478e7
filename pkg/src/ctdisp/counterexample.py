"""The sharpness family: frequency bumps drifting to -1/v^2.

For v in (0, v0) the profile is fhat_v(xi) = v g_v(v xi + 1/v) where g_v
is the plateau bump of outer radius w = v^((a-1) - a/gamma).  Its H^s
norm scales like v^((a - 4s - a/gamma)/2) and so vanishes as v -> 0 for
s below the critical index, while along the adapted time map
t(x) = x v^(2(a-1)) / a the propagator modulus stays bounded below on
the window x in [0, v^(2a/gamma - 2(a-1))]: the quotient blows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .bumps import Bump, make_bump
from .grids import (
    EvolutionParams,
    FrequencyGrid,
    FrequencyProfile,
    SpatialField,
    SpatialGrid,
    TimeLadder,
)
from .maximal import maximal_field, per_point_evolution
from .norms import l2_norm, sobolev_norm, weak_l2_quasinorm
from .quadrature import PHASE_STEP_MAX, required_count

__all__ = [
    "CounterexampleInstance",
    "ExperimentRecord",
    "InfeasibleGridError",
    "WindowError",
    "blow_up_trial",
    "make_bump",
    "make_instance",
    "optimal_time",
    "section3_checks",
]

DEFAULT_V0 = 0.5
DEFAULT_NODE_CAP = 1 << 24
DEFAULT_SAFETY = 2.0


class WindowError(ValueError):
    """x lies outside the admissible window of the instance."""


class InfeasibleGridError(RuntimeError):
    """The resolution policy asks for more nodes than the cap allows."""


@dataclass(frozen=True)
class CounterexampleInstance:
    """One member of the sharpness family, sampled and ready to evolve."""

    v: float
    a: float
    gamma: float
    profile: FrequencyProfile
    support_radius: float          # w = v^((a-1) - a/gamma), in the eta variable
    x_window: tuple
    bump: Bump = dc_field(repr=False, default=None)

    @property
    def center(self) -> float:
        return -1.0 / self.v**2

    @property
    def params(self) -> EvolutionParams:
        return EvolutionParams(a=self.a, gamma=self.gamma, sigma_mode="power")

    def max_optimal_time(self) -> float:
        return optimal_time(self.x_window[1], self.v, self.a)


def optimal_time(x: float, v: float, a: float, x_window: Optional[tuple] = None) -> float:
    """Adapted time t = x v^(2(a-1)) / a; 0 at the window's left edge
    (callers substitute the ladder infimum there)."""
    if x < 0:
        raise WindowError(f"x must be nonnegative, got {x}")
    if x_window is not None and x > x_window[1] * (1 + 1e-12):
        raise WindowError(f"x = {x} outside window [0, {x_window[1]}]")
    t = x * v ** (2.0 * (a - 1.0)) / a
    if x > 0 and not (0.0 < t < 1.0):
        raise WindowError(f"optimal time {t} escaped (0, 1) for x = {x}, v = {v}")
    return t


def make_instance(
    v: float,
    a: float,
    gamma: float,
    v0: float = DEFAULT_V0,
    t_max: Optional[float] = None,
    x_extent: Optional[float] = None,
    node_cap: int = DEFAULT_NODE_CAP,
    safety: float = DEFAULT_SAFETY,
    step_max: float = PHASE_STEP_MAX,
) -> CounterexampleInstance:
    """Sample fhat_v on a grid resolved for times up to ``t_max``.

    The grid covers the support [-1/v^2 - w/v, -1/v^2 + w/v]; the node
    count follows the phase-resolution policy at the largest time the
    instance will be evolved to (twice the largest adapted time unless
    overridden) and errors out above ``node_cap``.
    """
    if not 0.0 < v < v0:
        raise ValueError(f"need v in (0, {v0}), got {v}")
    if not gamma > 1:
        raise ValueError(f"the family needs gamma > 1, got {gamma}")
    if not a > 1:
        raise ValueError(f"need a > 1, got {a}")
    w = v ** ((a - 1.0) - a / gamma)
    x_max = v ** (2.0 * a / gamma - 2.0 * (a - 1.0))
    max_opt = optimal_time(x_max, v, a)
    if t_max is None:
        t_max = min(2.0 * max_opt, 0.5 * (1.0 + max_opt))
    if x_extent is None:
        x_extent = max(1.0, x_max)
    center = -1.0 / v**2
    half = w / v
    xi_lo, xi_hi = center - half, center + half
    xi_abs = max(abs(xi_lo), abs(xi_hi))
    n = required_count(2.0 * half, a, t_max, xi_abs, x_extent, step_max / safety)
    n = max(n, 65)
    if n % 2 == 0:
        n += 1
    if n > node_cap:
        raise InfeasibleGridError(
            f"instance (v={v}, a={a}, gamma={gamma}) needs {n} nodes "
            f"(cap {node_cap}); reduce t_max or x_extent"
        )
    bump = make_bump(w)
    grid = FrequencyGrid(xi_lo, xi_hi, n)
    profile = FrequencyProfile.from_function(
        lambda xi, _v=v, _b=bump: _v * _b(_v * xi + 1.0 / _v), grid
    )
    return CounterexampleInstance(
        v=v, a=a, gamma=gamma, profile=profile,
        support_radius=w, x_window=(0.0, x_max), bump=bump,
    )


def phase_remainder(inst: CounterexampleInstance, x, t, etas) -> np.ndarray:
    """F_{x,t,v}(eta) = x eta / v + t (|eta/v - 1/v^2|^a - v^(-2a)),
    evaluated stably via expm1/log1p (the two t-terms nearly cancel)."""
    v, a = inst.v, inst.a
    u = np.asarray(etas) * v
    return x * np.asarray(etas) / v + t * v ** (-2.0 * a) * np.expm1(a * np.log1p(-u))


def damping_term(inst: CounterexampleInstance, t, etas) -> np.ndarray:
    """G_{t,v}(eta) = t^gamma |eta/v - 1/v^2|^a."""
    v, a, gamma = inst.v, inst.a, inst.gamma
    u = np.asarray(etas) * v
    return t**gamma * v ** (-2.0 * a) * (1.0 - u) ** inst.a


def section3_checks(
    inst: CounterexampleInstance, xs: np.ndarray, eta_count: int = 129
):
    """Max of |F| and of G over the window times the bump support, along
    the adapted time map.  The phase bound max|F| <= 1 is the regime in
    which cos(F) >= cos(1) > 0.54 pins the modulus from below."""
    etas = np.linspace(-inst.support_radius, inst.support_radius, eta_count)
    f_max = 0.0
    g_max = 0.0
    for x in np.asarray(xs, dtype=np.float64):
        if x < 0:
            raise WindowError("window samples must be nonnegative")
        t = optimal_time(x, inst.v, inst.a, inst.x_window)
        if t == 0.0:
            continue
        f_max = max(f_max, float(np.max(np.abs(phase_remainder(inst, x, t, etas)))))
        g_max = max(g_max, float(np.max(damping_term(inst, t, etas))))
    return f_max, g_max


@dataclass(frozen=True)
class ExperimentRecord:
    """One row of a sharpness/convergence sweep."""

    a: float
    gamma: float
    s: float
    v: float
    sobolev_norm: float
    window_l2_lower: float
    maximal_l2: float
    ratio: float
    weak_ratio: float
    f_max: float
    g_max: float
    ladder_min: float
    ladder_max: float
    ladder_count: int
    grid_count: int
    x_count: int
    f_ok: bool
    g_ok: bool
    quad_delta: float
    ladder_delta: float

    CSV_HEADER = (
        "a,gamma,s,v,sobolev_norm,window_l2_lower,maximal_l2,ratio,"
        "F_max,G_max,ladder_min,ladder_max"
    )

    def csv_row(self) -> str:
        cols = [
            self.a, self.gamma, self.s, self.v, self.sobolev_norm,
            self.window_l2_lower, self.maximal_l2, self.ratio,
            self.f_max, self.g_max, self.ladder_min, self.ladder_max,
        ]
        return ",".join(f"{c:.12g}" for c in cols)

    @property
    def checks_pass(self) -> bool:
        return self.f_ok and self.g_ok

    def summary(self) -> dict:
        d = {
            "a": self.a, "gamma": self.gamma, "s": self.s, "v": self.v,
            "sobolev_norm": self.sobolev_norm,
            "window_l2_lower": self.window_l2_lower,
            "maximal_l2": self.maximal_l2,
            "ratio": self.ratio, "weak_ratio": self.weak_ratio,
            "F_max": self.f_max, "G_max": self.g_max,
            "ladder_min": self.ladder_min, "ladder_max": self.ladder_max,
            "ladder_count": self.ladder_count,
            "grid_count": self.grid_count, "x_count": self.x_count,
            "f_ok": self.f_ok, "g_ok": self.g_ok,
            "quad_delta": self.quad_delta, "ladder_delta": self.ladder_delta,
        }
        return d


def _trial_core(
    inst: CounterexampleInstance,
    ladder: Optional[TimeLadder],
    xs: Optional[SpatialGrid],
    x_count: int,
    ladder_count: int,
    certify: bool,
    quad_tol: float,
    ladder_tol: float,
) -> dict:
    """The s-independent part of a blow-up trial: lower-bound field,
    maximal field (ladder sup folded with the adapted-time moduli, so it
    dominates the lower field by construction), and the phase/damping
    checks."""
    if xs is None:
        xs = SpatialGrid(0.0, inst.x_window[1], x_count)
    x_nodes = xs.nodes()
    if x_nodes[0] < 0 or x_nodes[-1] > inst.x_window[1] * (1 + 1e-12):
        raise WindowError("spatial grid must lie inside the instance window")

    opt_times = np.array(
        [optimal_time(x, inst.v, inst.a, inst.x_window) for x in x_nodes]
    )
    positive = opt_times[opt_times > 0]
    if positive.size == 0:
        raise WindowError("window grid has no interior points")
    min_opt, max_opt = float(np.min(positive)), float(np.max(positive))
    if ladder is None:
        t_hi = min(2.0 * max_opt, 0.5 * (1.0 + max_opt))
        ladder = TimeLadder(0.5 * min_opt, t_hi, ladder_count, "geometric")
    if ladder.t_min > min_opt:
        raise WindowError(
            f"ladder t_min {ladder.t_min} does not cover the smallest adapted "
            f"time {min_opt}"
        )

    # x = 0 is the flagged boundary point: evolve it at the ladder infimum
    t_map = np.where(opt_times > 0, opt_times, ladder.t_min)
    lower_vals = per_point_evolution(inst.profile, inst.params, t_map, xs)
    window_l2_lower = l2_norm(SpatialField(xs, lower_vals))

    if certify:
        mf, quad_cert, ladder_cert = maximal_field(
            inst.profile, inst.params, ladder, xs,
            certify=True, quad_tol=quad_tol, ladder_tol=ladder_tol,
        )
        quad_delta, ladder_delta = quad_cert.delta, ladder_cert.delta
    else:
        mf = maximal_field(inst.profile, inst.params, ladder, xs)
        quad_delta = ladder_delta = float("nan")

    sup_aug = np.maximum(mf.sup_values, np.abs(lower_vals))
    sup_field = SpatialField(xs, sup_aug.astype(np.complex128))
    f_max, g_max = section3_checks(inst, x_nodes)
    return {
        "xs": xs,
        "ladder": ladder,
        "window_l2_lower": window_l2_lower,
        "maximal_l2": l2_norm(sup_field),
        "weak_l2": weak_l2_quasinorm(sup_field),
        "f_max": f_max,
        "g_max": g_max,
        "quad_delta": quad_delta,
        "ladder_delta": ladder_delta,
    }


def _record_from_core(inst, s, core, f_cap, g_cap) -> ExperimentRecord:
    sob = sobolev_norm(inst.profile, s, homogeneous=False)
    if sob <= 0:
        raise ValueError("instance profile has zero Sobolev norm")
    return ExperimentRecord(
        a=inst.a, gamma=inst.gamma, s=s, v=inst.v,
        sobolev_norm=sob,
        window_l2_lower=core["window_l2_lower"],
        maximal_l2=core["maximal_l2"],
        ratio=core["maximal_l2"] / sob,
        weak_ratio=core["weak_l2"] / sob,
        f_max=core["f_max"], g_max=core["g_max"],
        ladder_min=core["ladder"].t_min, ladder_max=core["ladder"].t_max,
        ladder_count=core["ladder"].count,
        grid_count=inst.profile.grid.count, x_count=core["xs"].count,
        f_ok=core["f_max"] <= f_cap, g_ok=core["g_max"] <= g_cap,
        quad_delta=core["quad_delta"], ladder_delta=core["ladder_delta"],
    )


def blow_up_trial(
    inst: CounterexampleInstance,
    s: float,
    ladder: Optional[TimeLadder] = None,
    xs: Optional[SpatialGrid] = None,
    x_count: int = 257,
    ladder_count: int = 512,
    certify: bool = True,
    quad_tol: float = 1e-4,
    ladder_tol: float = 0.01,
    f_cap: float = 1.0,
    g_cap: float = 2.0,
) -> ExperimentRecord:
    """Run the blow-up experiment for one (instance, s).

    Computes the H^s norm, the propagator modulus along the adapted time
    map and its L^2 over the window, the maximal field over a ladder
    covering the adapted times, and the ratio statistics; the phase and
    damping envelope maxima are recorded with pass flags instead of being
    assumed small.
    """
    core = _trial_core(inst, ladder, xs, x_count, ladder_count, certify,
                       quad_tol, ladder_tol)
    return _record_from_core(inst, s, core, f_cap, g_cap)


def blow_up_trials(
    inst: CounterexampleInstance,
    s_values,
    ladder: Optional[TimeLadder] = None,
    xs: Optional[SpatialGrid] = None,
    x_count: int = 257,
    ladder_count: int = 512,
    certify: bool = True,
    quad_tol: float = 1e-4,
    ladder_tol: float = 0.01,
    f_cap: float = 1.0,
    g_cap: float = 2.0,
):
    """blow_up_trial across an s-ladder, reusing the s-independent fields."""
    core = _trial_core(inst, ladder, xs, x_count, ladder_count, certify,
                       quad_tol, ladder_tol)
    return [_record_from_core(inst, s, core, f_cap, g_cap) for s in s_values]

"""Maximal fields over time ladders and the linearized (fixed time-map)
operator obtained by replacing the supremum with a measurable choice of
time per point."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .backends import kernels
from .bumps import make_bump
from .grids import EvolutionParams, FrequencyProfile, SpatialField, SpatialGrid, TimeLadder
from .norms import l2_norm, sobolev_norm, weak_l2_quasinorm
from .propagator import certified_values, evolution_table, _raw_table
from .quadrature import PHASE_STEP_MAX, HalvingCertificate, check_resolution, trapezoid_weights

__all__ = [
    "LadderCertificate",
    "MaximalField",
    "linearized_evolution",
    "maximal_field",
    "per_point_evolution",
    "ratio_statistic",
]


@dataclass(frozen=True)
class LadderCertificate:
    """Relative L^2 change of the maximal field when the ladder doubles."""

    delta: float
    tol: float
    count: int

    @property
    def passed(self) -> bool:
        return self.delta <= self.tol


@dataclass(frozen=True)
class MaximalField:
    """Pointwise sup of |propagator| over a time ladder.

    argmax_t records the attaining ladder time per point, ties broken
    toward the smaller time (np.argmax keeps the first maximum and the
    ladder is increasing).
    """

    base: SpatialGrid
    sup_values: np.ndarray
    argmax_t: np.ndarray
    ladder: TimeLadder

    def as_field(self) -> SpatialField:
        return SpatialField(self.base, self.sup_values.astype(np.complex128))

    def to_csv(self) -> str:
        lines = ["x,sup,argmax_t"]
        for x, s, t in zip(self.base.nodes(), self.sup_values, self.argmax_t):
            lines.append(f"{x:.12g},{s:.12g},{t:.12g}")
        return "\n".join(lines) + "\n"


def _reduce_table(table: np.ndarray, times: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mods = np.abs(table)
    idx = np.argmax(mods, axis=0)
    sup = mods[idx, np.arange(mods.shape[1])]
    return sup, times[idx]


def maximal_field(
    profile: FrequencyProfile,
    params: EvolutionParams,
    ladder: TimeLadder,
    xs: SpatialGrid,
    certify: bool = False,
    quad_tol: float = 1e-6,
    ladder_tol: float = 0.01,
):
    """Pointwise max over the ladder of |propagator|, with argmax record.

    With ``certify=True`` returns (field, quadrature certificate, ladder
    certificate); the ladder certificate reports the relative L^2 change
    of the maximal field when the ladder count doubles.
    """
    times = ladder.times()
    sigmas = np.array([params.sigma_at(t) for t in times])

    if not certify:
        table = evolution_table(profile, params.a, times, sigmas, xs)
        sup, arg = _reduce_table(table, times)
        return MaximalField(xs, sup, arg, ladder)

    check_resolution(
        profile.grid.spacing, params.a, float(times[-1]),
        profile.grid.max_abs, xs.max_abs,
        span=profile.grid.xi_max - profile.grid.xi_min,
    )
    table, used_profile, quad_cert = certified_values(
        lambda p: _raw_table(p, params.a, times, sigmas, xs.nodes()),
        profile,
        tol=quad_tol,
    )
    sup, arg = _reduce_table(table, times)
    fine = ladder.refined()
    fine_times = fine.times()
    fine_sigmas = np.array([params.sigma_at(t) for t in fine_times])
    fine_table = _raw_table(used_profile, params.a, fine_times, fine_sigmas, xs.nodes())
    fine_sup, _ = _reduce_table(fine_table, fine_times)
    base_l2 = l2_norm(SpatialField(xs, sup.astype(np.complex128)))
    fine_l2 = l2_norm(SpatialField(xs, fine_sup.astype(np.complex128)))
    delta = abs(fine_l2 - base_l2) / max(fine_l2, 1e-300)
    ladder_cert = LadderCertificate(delta, ladder_tol, ladder.count)
    return MaximalField(xs, sup, arg, ladder), quad_cert, ladder_cert


def per_point_evolution(
    profile: FrequencyProfile,
    params: EvolutionParams,
    t_map: np.ndarray,
    xs: SpatialGrid,
    xi_cutoff=None,
    x_cutoff=None,
    step_max: float = PHASE_STEP_MAX,
) -> np.ndarray:
    """Propagator evaluated at a per-point time assignment t(x).

    Optional multiplicative cutoffs (callables of xi and of x) implement
    the frequency/space truncations of the linearized operator.
    """
    t_map = np.asarray(t_map, dtype=np.float64)
    if t_map.shape != (xs.count,):
        raise ValueError("t_map must assign one time per spatial node")
    if np.any(t_map <= 0.0) or np.any(t_map >= 1.0):
        raise ValueError("t_map values must lie in (0, 1)")
    check_resolution(
        profile.grid.spacing, params.a, float(np.max(t_map)),
        profile.grid.max_abs, xs.max_abs,
        step_max=step_max, span=profile.grid.xi_max - profile.grid.xi_min,
    )
    xi = profile.grid.nodes()
    w = trapezoid_weights(profile.grid.count, profile.grid.spacing)
    fw = w * profile.values
    if xi_cutoff is not None:
        fw = fw * xi_cutoff(xi)
    pow_a = np.abs(xi) ** params.a
    sigmas = np.array([params.sigma_at(t) for t in t_map])
    coeffs = np.exp(np.outer(1j * t_map - sigmas, pow_a)) * fw[None, :]
    vals = kernels().per_point_table(xi, np.ascontiguousarray(coeffs), xs.nodes())
    if x_cutoff is not None:
        vals = vals * x_cutoff(xs.nodes())
    return vals


def linearized_evolution(
    profile: FrequencyProfile,
    params: EvolutionParams,
    t_map: np.ndarray,
    N: float,
    xs: SpatialGrid,
) -> SpatialField:
    """eta(x/N) * integral fhat(xi) e^{i t(x)|xi|^a - t(x)^gamma |xi|^a}
    e^{i x xi} eta(xi/N) dxi with the standard plateau cutoff eta
    (support [-1, 1], plateau [-1/2, 1/2])."""
    if not N > 0:
        raise ValueError(f"cutoff scale N must be positive, got {N}")
    eta = make_bump(1.0)
    vals = per_point_evolution(
        profile,
        params,
        t_map,
        xs,
        xi_cutoff=lambda xi: eta(xi / N),
        x_cutoff=lambda x: eta(x / N),
    )
    return SpatialField(xs, vals)


def ratio_statistic(
    profile: FrequencyProfile,
    params: EvolutionParams,
    ladder: TimeLadder,
    xs: SpatialGrid,
    s: float,
    region: Optional[Tuple[float, float]] = None,
    norm_kind: str = "strong",
    tail_limit: Optional[float] = None,
) -> float:
    """Norm of the maximal field over the region divided by the
    (inhomogeneous) H^s norm of the profile; the quotient whose growth or
    boundedness across a profile family encodes the critical index.

    With region None the finite grid stands in for the whole line; pass
    ``tail_limit`` (e.g. 1e-3) to insist that the outer 10% annulus of
    the grid carries at most that share of the field's squared mass.
    """
    if norm_kind not in ("strong", "weak"):
        raise ValueError("norm_kind must be 'strong' or 'weak'")
    denom = sobolev_norm(profile, s, homogeneous=False)
    if denom <= 0.0:
        raise ValueError("profile has zero Sobolev norm")
    mf = maximal_field(profile, params, ladder, xs)
    fld = mf.as_field()
    if region is None and tail_limit is not None:
        from .norms import RegionError, tail_mass_fraction

        frac = tail_mass_fraction(fld)
        if frac > tail_limit:
            raise RegionError(
                f"grid too narrow for a whole-line norm: outer-annulus mass "
                f"fraction {frac:.3e} exceeds {tail_limit:.3e}"
            )
    num = l2_norm(fld, region) if norm_kind == "strong" else weak_l2_quasinorm(fld, region)
    return num / denom

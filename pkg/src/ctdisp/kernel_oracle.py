"""Numerical probes of the oscillatory kernel behind the maximal bound.

The probe integral is

    integral e^{i((t1 - t2)|xi|^a - x xi)} (1 + xi^2)^(-alpha/2)
             e^{-(t1^gamma + t2^gamma)|xi|^a} mu(xi/N) dxi

with mu a fixed plateau bump.  Uniformly over (t1, t2) in (0,1)^2 and
cutoff scales N, its modulus is dominated by an integrable envelope
whenever alpha exceeds a(1 - 1/gamma)/2; the module computes sampled
envelopes, fits their wing decay, and produces Van der Corput-style
certificates for the non-stationary regions of the phase
F(xi) = t xi^a - x xi, whose stationary point sits at
rho = (|x| / (t a))^(1/(a-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bumps import make_bump
from .grids import FrequencyGrid, FrequencyProfile, SpatialGrid
from .propagator import certified_values, _raw_table
from .quadrature import (
    PHASE_STEP_MAX,
    check_resolution,
    halving_delta,
    required_count,
    trapezoid_weights,
)

__all__ = [
    "EnvelopeReport",
    "KernelProbeParams",
    "RegionSplit",
    "envelope_l1_estimate",
    "h_eps_derivative_bounds",
    "j2_decay_exponent",
    "phase_d1",
    "phase_d2",
    "phase_d3",
    "phase_value",
    "probe_envelope",
    "probe_integral",
    "probe_table",
    "region_split",
    "restricted_probe_integral",
    "stationary_point",
    "vdc_certificate",
]

VDC_C1 = 3.0
VDC_C2 = 8.0
DEFAULT_DELTA = 0.125
DEFAULT_BIG_K = 8.0
DEFAULT_C0 = 8.0


# ---------------------------------------------------------------------------
# phase helpers (positive-frequency branch)
# ---------------------------------------------------------------------------

def phase_value(a: float, t: float, x: float, xi):
    return t * np.asarray(xi) ** a - x * np.asarray(xi)


def phase_d1(a: float, t: float, x: float, xi):
    return a * t * np.asarray(xi) ** (a - 1.0) - x


def phase_d2(a: float, t: float, xi):
    return a * (a - 1.0) * t * np.asarray(xi) ** (a - 2.0)


def phase_d3(a: float, t: float, xi):
    return a * (a - 1.0) * (a - 2.0) * t * np.asarray(xi) ** (a - 3.0)


def stationary_point(a: float, t: float, x: float) -> float:
    """rho = (|x| / (t a))^(1/(a-1)); the phase derivative a t xi^(a-1) - x
    vanishes there for x > 0."""
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    if x == 0:
        return 0.0
    return (abs(x) / (t * a)) ** (1.0 / (a - 1.0))


# ---------------------------------------------------------------------------
# probe parameters and integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelProbeParams:
    """Parameters of one probe integral.

    alpha is the Sobolev weight exponent (alpha = 2s).  The envelope
    theory wants alpha > a (1 - 1/gamma) / 2, and additionally
    alpha < 1/2 when gamma < a/(a-1); violations are reported through
    :meth:`hypothesis_flags` rather than rejected, so that probes can be
    run on purpose in the failing regime.
    """

    a: float
    gamma: float
    alpha: float
    N: float
    t1: float
    t2: float
    mu_radius: float = 1.0

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError(f"need a > 1, got {self.a}")
        if not self.gamma > 1:
            raise ValueError(f"need gamma > 1, got {self.gamma}")
        if not self.alpha > 0:
            raise ValueError(f"need alpha > 0, got {self.alpha}")
        if not self.N > 0:
            raise ValueError(f"need N > 0, got {self.N}")
        for t in (self.t1, self.t2):
            if not 0.0 < t < 1.0:
                raise ValueError(f"times must lie in (0, 1), got {t}")
        if not self.mu_radius > 0:
            raise ValueError("mu_radius must be positive")

    @property
    def t_osc(self) -> float:
        """Signed oscillation time t1 - t2."""
        return self.t1 - self.t2

    @property
    def eps(self) -> float:
        """Damping coefficient t1^gamma + t2^gamma."""
        return self.t1**self.gamma + self.t2**self.gamma

    def alpha_critical(self) -> float:
        return 0.5 * self.a * (1.0 - 1.0 / self.gamma)

    def hypothesis_flags(self) -> dict:
        below_crit_gamma = self.gamma < self.a / (self.a - 1.0)
        ok_alpha = self.alpha > self.alpha_critical()
        ok_half = (not below_crit_gamma) or self.alpha < 0.5
        return {
            "alpha_above_critical": ok_alpha,
            "alpha_below_half_where_required": ok_half,
            "satisfied": ok_alpha and ok_half,
        }

    def amplitude_profile(self, x_max: float, safety: float = 2.0,
                          step_max: float = PHASE_STEP_MAX) -> FrequencyProfile:
        """(1 + xi^2)^(-alpha/2) mu(xi/N) sampled on a resolved symmetric grid."""
        radius = self.N * self.mu_radius
        n = required_count(
            2.0 * radius, self.a, abs(self.t_osc), radius, x_max, step_max / safety
        )
        n = max(n, 129)
        mu = make_bump(1.0)

        def fn(xi, _alpha=self.alpha, _N=self.N, _mu=mu):
            return (1.0 + xi**2) ** (-0.5 * _alpha) * _mu(xi / _N)

        return FrequencyProfile.from_function(fn, FrequencyGrid.symmetric(radius, n))


def probe_table(
    base: KernelProbeParams,
    pairs: Sequence[Tuple[float, float]],
    xs: np.ndarray,
    certify: bool = False,
    quad_tol: float = 1e-6,
):
    """Probe integrals for several (t1, t2) pairs sharing (a, gamma,
    alpha, N); returns a (len(pairs), len(xs)) complex table (and the
    halving delta when certified)."""
    xs = np.asarray(xs, dtype=np.float64)
    pairs_arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
    t_osc = pairs_arr[:, 0] - pairs_arr[:, 1]
    eps = pairs_arr[:, 0] ** base.gamma + pairs_arr[:, 1] ** base.gamma
    x_max = float(np.max(np.abs(xs))) if xs.size else 0.0
    worst = base
    if pairs_arr.size:
        i_worst = int(np.argmax(np.abs(t_osc)))
        worst = KernelProbeParams(
            base.a, base.gamma, base.alpha, base.N,
            pairs_arr[i_worst, 0], pairs_arr[i_worst, 1], base.mu_radius,
        )
    profile = worst.amplitude_profile(x_max)
    check_resolution(
        profile.grid.spacing, base.a, float(np.max(np.abs(t_osc))),
        profile.grid.max_abs, x_max,
        span=profile.grid.xi_max - profile.grid.xi_min,
    )
    # phase is t_osc |xi|^a - x xi: evaluate the synthesis table at -x
    if not certify:
        return _raw_table(profile, base.a, t_osc, eps, -xs)
    table, _, cert = certified_values(
        lambda p: _raw_table(p, base.a, t_osc, eps, -xs), profile, tol=quad_tol
    )
    return table, cert


def probe_integral(p: KernelProbeParams, x: float, certify: bool = False,
                   quad_tol: float = 1e-6):
    """Single probe value at spatial point x."""
    out = probe_table(p, [(p.t1, p.t2)], np.array([x]), certify=certify,
                      quad_tol=quad_tol)
    if certify:
        table, cert = out
        return complex(table[0, 0]), cert
    return complex(out[0, 0])


def restricted_probe_integral(
    p: KernelProbeParams, x: float, interval: Tuple[float, float],
    safety: float = 4.0,
) -> complex:
    """Probe integrand integrated over a single positive-frequency
    interval; the quadrature oracle that Van der Corput certificates must
    dominate."""
    lo, hi = interval
    if not (0.0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got ({lo}, {hi})")
    n = required_count(hi - lo, p.a, abs(p.t_osc), hi, abs(x), PHASE_STEP_MAX / safety)
    n = max(n, 513)
    if n % 2 == 0:
        n += 1
    xi = np.linspace(lo, hi, n)
    w = trapezoid_weights(n, xi[1] - xi[0])
    g = _amplitude_values(p, xi)
    phase = phase_value(p.a, p.t_osc, x, xi)
    return complex(np.sum(w * g * np.exp(1j * phase)))


def _amplitude_values(p: KernelProbeParams, xi: np.ndarray) -> np.ndarray:
    mu = make_bump(1.0)
    return ((1.0 + xi**2) ** (-0.5 * p.alpha)
            * np.exp(-p.eps * np.abs(xi) ** p.a)
            * mu(xi / p.N))


# ---------------------------------------------------------------------------
# stationary-phase geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionSplit:
    """Cut points isolating the stationary neighbourhood of the phase.

    Small-x branch cuts at (|x|^-1, delta rho, K rho); the large-x branch
    replaces the first cut by 1.  ``degenerate`` marks the no-oscillation
    case t1 = t2 (or x = 0), where no stationary geometry exists.
    """

    rho: float
    boundaries: tuple
    delta: float
    big_k: float
    branch: str
    degenerate: bool = False

    def __post_init__(self):
        if not self.degenerate:
            b = self.boundaries
            if any(b[i] > b[i + 1] for i in range(len(b) - 1)):
                raise ValueError(f"boundaries must be sorted ascending, got {b}")


def effective_cut_constants(a: float, delta: float = DEFAULT_DELTA,
                            big_k: float = DEFAULT_BIG_K) -> Tuple[float, float]:
    """Rescale (delta, K) so delta^(a-1) <= 1/2 <= 2 <= K^(a-1); the
    defaults already satisfy this for a >= 2 but not for a near 1."""
    exp = 1.0 / (a - 1.0)
    return min(delta, 0.5**exp), max(big_k, 2.0**exp)


def region_split_at(
    a: float, t: float, x: float,
    delta: float = DEFAULT_DELTA, big_k: float = DEFAULT_BIG_K,
    c0: float = DEFAULT_C0,
) -> RegionSplit:
    """Region cuts from explicit (a, t, x) with t the oscillation time."""
    d_eff, k_eff = effective_cut_constants(a, delta, big_k)
    if t == 0.0 or x == 0.0:
        return RegionSplit(
            rho=0.0, boundaries=(), delta=d_eff, big_k=k_eff,
            branch="degenerate", degenerate=True,
        )
    rho = stationary_point(a, abs(t), x)
    if abs(x) <= c0:
        first = 1.0 / abs(x)
        branch = "small_x"
    else:
        first = 1.0
        branch = "large_x"
    cuts = tuple(sorted((first, d_eff * rho, k_eff * rho)))
    return RegionSplit(rho=rho, boundaries=cuts, delta=d_eff, big_k=k_eff,
                       branch=branch)


def region_split(
    p: KernelProbeParams, x: float,
    delta: float = DEFAULT_DELTA, big_k: float = DEFAULT_BIG_K,
    c0: float = DEFAULT_C0,
) -> RegionSplit:
    return region_split_at(p.a, p.t_osc, x, delta, big_k, c0)


# ---------------------------------------------------------------------------
# Van der Corput certificates
# ---------------------------------------------------------------------------

def vdc_certificate(
    p: KernelProbeParams, x: float, interval: Tuple[float, float],
    derivative_order: int, c1: float = VDC_C1, c2: float = VDC_C2,
    sample_count: int = 8193, amplitude=None,
) -> float:
    """c_k (inf |F^(k)|)^(-1/k) (sup |G| + integral |G'|) over the interval.

    Order 1 requires F' of one sign (it is monotone in xi for fixed t);
    order 2 requires inf |F''| > 0.  The classical constants c1 = 3 and
    c2 = 8 make the certificate a true upper bound for the restricted
    integral.
    """
    lo, hi = interval
    if not (0.0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got ({lo}, {hi})")
    t = p.t_osc
    if derivative_order == 1:
        d_lo = float(phase_d1(p.a, t, x, lo)) if lo > 0 else -x
        d_hi = float(phase_d1(p.a, t, x, hi))
        if d_lo * d_hi < 0:
            raise ValueError(
                "F' changes sign on the interval; first-order certificate "
                "requires monotone nonvanishing F'"
            )
        lam = min(abs(d_lo), abs(d_hi))
        if lam <= 0:
            raise ValueError("inf|F'| must be positive for a first-order certificate")
        scale = c1 / lam
    elif derivative_order == 2:
        if t == 0.0:
            raise ValueError("F'' vanishes identically when t1 = t2")
        if lo <= 0.0:
            raise ValueError("second-order certificate needs an interval with lo > 0")
        d2 = np.abs(phase_d2(p.a, t, np.array([lo, hi])))
        lam = float(np.min(d2))
        if lam <= 0:
            raise ValueError("inf|F''| must be positive")
        scale = c2 / math.sqrt(lam)
    else:
        raise ValueError("derivative_order must be 1 or 2")
    xi = np.linspace(lo, hi, sample_count)
    g = _amplitude_values(p, xi) if amplitude is None else np.asarray(amplitude(xi))
    sup_g = float(np.max(np.abs(g)))
    dg = np.gradient(g, xi[1] - xi[0])
    var_g = float(np.sum(trapezoid_weights(sample_count, xi[1] - xi[0]) * np.abs(dg)))
    return scale * (sup_g + var_g)


# ---------------------------------------------------------------------------
# exponential-damping derivative bounds
# ---------------------------------------------------------------------------

_C2_BOUND = 4.0 * math.exp(-2.0)  # max of y^2 e^{-y}; dominates max of y e^{-y}


def h_eps_derivative_bounds(a: float, eps: float, xi: float):
    """Certified bounds for h(xi) = e^{-eps |xi|^a}, uniform in eps:

        |h'(xi)|  <= a e^{-1} / |xi|
        |h''(xi)| <= (a^2 + a) (4 e^{-2}) / xi^2

    Returns ((|h'|, bound1), (|h''|, bound2)) and raises AssertionError
    if either bound fails.
    """
    if not a > 1:
        raise ValueError(f"need a > 1, got {a}")
    if not eps > 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if xi == 0:
        raise ValueError("bounds are for xi != 0")
    r = abs(xi)
    y = eps * r**a
    damp = math.exp(-y)
    d1 = eps * a * r ** (a - 1.0) * damp
    d2 = abs(eps**2 * a**2 * r ** (2.0 * a - 2.0)
             - eps * a * (a - 1.0) * r ** (a - 2.0)) * damp
    bound1 = a * math.exp(-1.0) / r
    bound2 = (a**2 + a) * _C2_BOUND / r**2
    if not bound1 >= d1:
        raise AssertionError(f"first-derivative bound failed: {d1} > {bound1}")
    if not bound2 >= d2:
        raise AssertionError(f"second-derivative bound failed: {d2} > {bound2}")
    return (d1, bound1), (d2, bound2)


def j2_decay_exponent(a: float, gamma: float, alpha: float) -> float:
    """Predicted polynomial decay rate |x|^(-k) of the stationary-region
    contribution at large |x|:

        k = (alpha + (a-2)/2 + beta a) / (a-1),
        beta = (alpha - 1/2) / ((a-1) gamma - a).

    At gamma = a/(a-1) the region decays faster than any power and the
    formula returns +inf.  k crosses 1 exactly at the critical alpha.
    """
    denom = (a - 1.0) * gamma - a
    if denom == 0.0:
        return math.inf
    beta = (alpha - 0.5) / denom
    return (alpha + 0.5 * (a - 2.0) + beta * a) / (a - 1.0)


# ---------------------------------------------------------------------------
# envelope study
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeReport:
    """Sampled uniform envelope E(x) = max over (t1,t2,N) probes of the
    probe modulus, with fitted wing slopes and L^1 mass diagnostics."""

    a: float
    gamma: float
    alpha: float
    xs: np.ndarray
    envelope: np.ndarray
    small_slope: float
    large_slope: float
    l1_mass: float
    l1_mass_wide: float
    mass_change: float
    predicted_k: float
    hypothesis: dict
    sample_count: int
    quad_delta: float

    def predicted_bound(self) -> np.ndarray:
        """Piecewise power envelope anchored at the measured values:
        x^(min(0, alpha-1)) below the knee, x^(-min(2, k)) above,
        calibrated so it dominates the measured envelope."""
        p_small = min(0.0, self.alpha - 1.0)
        p_large = -min(2.0, self.predicted_k)
        shape = np.where(self.xs <= 1.0, self.xs**p_small, self.xs**p_large)
        pos = self.envelope > 0
        c = float(np.max(self.envelope[pos] / shape[pos])) if np.any(pos) else 0.0
        return c * shape

    def csv_rows(self) -> List[str]:
        rows = ["x,E,predicted_bound"]
        bound = self.predicted_bound()
        for x, e, b in zip(self.xs, self.envelope, bound):
            rows.append(f"{x:.12g},{e:.12g},{b:.12g}")
        return rows

    def summary(self) -> dict:
        return {
            "a": self.a, "gamma": self.gamma, "alpha": self.alpha,
            "small_x_slope": self.small_slope,
            "large_x_slope": self.large_slope,
            "l1_mass": self.l1_mass,
            "l1_mass_wide": self.l1_mass_wide,
            "mass_change": self.mass_change,
            "predicted_k": (None if math.isinf(self.predicted_k)
                            else self.predicted_k),
            "gamma_at_critical_ratio": math.isinf(self.predicted_k),
            "hypothesis": self.hypothesis,
            "sample_count": self.sample_count,
            "quad_delta": self.quad_delta,
            "x_min": float(self.xs[0]), "x_max": float(self.xs[-1]),
            "x_count": int(len(self.xs)),
        }


def default_probe_corpus(
    pair_count: int = 12,
    diag_count: int = 6,
    t_floor: float = 1e-3,
    n_ladder: Sequence[float] = (4.0, 16.0, 64.0, 256.0),
    n_diag: Sequence[float] = (1024.0, 4096.0),
    seed: int = 12345,
) -> List[Tuple[float, float, float]]:
    """Deterministic (t1, t2, N) sample corpus: diagonal pairs (no
    oscillation, probing the kernel bulk), maximally split pairs, and
    seeded random pairs, crossed with the N ladder; the large-N entries
    pair only with the diagonal (they resolve the small-x wing, where
    oscillation is irrelevant, at acceptable cost)."""
    diag_ts = np.geomspace(t_floor, 0.9, diag_count)
    pairs = [(float(t), float(t)) for t in diag_ts]
    pairs += [(float(t), t_floor) for t in np.geomspace(10 * t_floor, 0.9, diag_count)]
    rng = np.random.default_rng(seed)
    for _ in range(pair_count):
        t1, t2 = rng.uniform(t_floor, 0.95, size=2)
        pairs.append((float(t1), float(t2)))
    corpus = [(t1, t2, float(N)) for N in n_ladder for (t1, t2) in pairs]
    corpus += [(float(t), float(t), float(N)) for N in n_diag for t in diag_ts]
    return corpus


def probe_envelope(
    a: float,
    gamma: float,
    alpha: float,
    samples: Iterable[Tuple[float, float, float]],
    xs: np.ndarray,
    mu_radius: float = 1.0,
    certify: bool = False,
    quad_tol: float = 1e-4,
):
    """E(x) = max over the (t1, t2, N) samples of |probe integral|.

    Growing the sample set can only increase E pointwise.  Returns
    (E, max halving delta) when certified.
    """
    xs = np.asarray(xs, dtype=np.float64)
    env = np.zeros_like(xs)
    worst_delta = 0.0
    by_n: dict = {}
    for t1, t2, N in samples:
        by_n.setdefault(float(N), []).append((float(t1), float(t2)))
    for N in sorted(by_n):
        pairs = by_n[N]
        base = KernelProbeParams(a, gamma, alpha, N, pairs[0][0], pairs[0][1],
                                 mu_radius)
        if certify:
            table, cert = probe_table(base, pairs, xs, certify=True,
                                      quad_tol=quad_tol)
            worst_delta = max(worst_delta, cert.delta)
        else:
            table = probe_table(base, pairs, xs)
        np.maximum(env, np.max(np.abs(table), axis=0), out=env)
    if certify:
        return env, worst_delta
    return env


def _fit_slope(xs: np.ndarray, env: np.ndarray) -> float:
    pos = env > 1e-300
    if np.count_nonzero(pos) < 2:
        return float("nan")
    return float(np.polyfit(np.log(xs[pos]), np.log(env[pos]), 1)[0])


def envelope_l1_estimate(
    a: float,
    gamma: float,
    alpha: float,
    x_min: float = 1e-3,
    x_max: float = 1e2,
    x_count: int = 61,
    samples: Optional[Iterable[Tuple[float, float, float]]] = None,
    mu_radius: float = 1.0,
    wide_factor: float = 2.0,
    certify: bool = True,
    quad_tol: float = 1e-4,
    seed: int = 12345,
) -> EnvelopeReport:
    """Sampled-envelope study over a geometric |x| ladder.

    Fits least-squares log-log slopes over the inner and outer thirds of
    the x-range, reports the numerical L^1 mass of the (even) envelope
    and its relative change when the range is widened by ``wide_factor``
    on both ends at fixed points-per-decade.
    """
    if samples is None:
        samples = default_probe_corpus(seed=seed)
    samples = list(samples)
    ppd = (x_count - 1) / math.log10(x_max / x_min)
    lo_w, hi_w = x_min / wide_factor, x_max * wide_factor
    n_wide = int(round(ppd * math.log10(hi_w / lo_w))) + 1
    xs_wide = np.geomspace(lo_w, hi_w, n_wide)
    if certify:
        env_wide, delta = probe_envelope(a, gamma, alpha, samples, xs_wide,
                                         mu_radius, certify=True, quad_tol=quad_tol)
    else:
        env_wide = probe_envelope(a, gamma, alpha, samples, xs_wide, mu_radius)
        delta = float("nan")
    inner = (xs_wide >= x_min * (1 - 1e-12)) & (xs_wide <= x_max * (1 + 1e-12))
    xs = xs_wide[inner]
    env = env_wide[inner]

    third = (x_max / x_min) ** (1.0 / 3.0)
    small = xs <= x_min * third
    large = xs >= x_max / third
    small_slope = _fit_slope(xs[small], env[small])
    large_slope = _fit_slope(xs[large], env[large])

    l1 = 2.0 * float(np.trapezoid(env, xs))
    l1_wide = 2.0 * float(np.trapezoid(env_wide, xs_wide))
    mass_change = abs(l1_wide - l1) / max(l1, 1e-300)

    p0 = KernelProbeParams(a, gamma, alpha, 1.0, 0.5, 0.25, mu_radius)
    return EnvelopeReport(
        a=a, gamma=gamma, alpha=alpha, xs=xs, envelope=env,
        small_slope=small_slope, large_slope=large_slope,
        l1_mass=l1, l1_mass_wide=l1_wide, mass_change=mass_change,
        predicted_k=j2_decay_exponent(a, gamma, alpha),
        hypothesis=p0.hypothesis_flags(),
        sample_count=len(samples), quad_delta=delta,
    )

"""Composite-trapezoid quadrature with phase-resolution guards.

All propagator values are quadratures of smooth, effectively compactly
supported integrands, so resolved trapezoid sums converge fast.  Two
safeguards are enforced:

* a hard precondition on the frequency step: the phase advance per step,
  ``dxi * (|t| a Xi^(a-1) + X)`` with ``Xi = max|xi|`` and ``X = max|x|``,
  must stay below a fixed fraction of a period (pi/4 by default);
* an a-posteriori halving certificate: the value recomputed on every
  other node must agree with the full-grid value to the configured
  relative tolerance, else the evaluation is refined (when the profile
  can be resampled) or rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HalvingCertificate",
    "PHASE_STEP_MAX",
    "ResolutionError",
    "halving_delta",
    "phase_step",
    "required_count",
    "check_resolution",
    "trapezoid_weights",
    "trapezoid",
]

PHASE_STEP_MAX = math.pi / 4


class ResolutionError(ValueError):
    """Raised when a grid is too coarse for the phase it must resolve."""


@dataclass(frozen=True)
class HalvingCertificate:
    """Relative change of a quadrature value when the grid is halved."""

    delta: float
    tol: float
    count_full: int
    count_coarse: int

    @property
    def passed(self) -> bool:
        return self.delta <= self.tol


def trapezoid_weights(count: int, spacing: float) -> np.ndarray:
    w = np.full(count, spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def trapezoid(values: np.ndarray, spacing: float) -> float:
    return float(np.sum(trapezoid_weights(len(values), spacing) * values))


def phase_step(spacing: float, a: float, t_abs: float, xi_max: float, x_max: float) -> float:
    """Worst-case phase advance of e^{i(t|xi|^a + x xi)} over one grid step."""
    return spacing * (t_abs * a * xi_max ** (a - 1.0) + x_max)


def required_count(
    span: float, a: float, t_abs: float, xi_max: float, x_max: float,
    step_max: float = PHASE_STEP_MAX,
) -> int:
    rate = t_abs * a * xi_max ** (a - 1.0) + x_max
    if rate <= 0:
        return 2
    return max(2, int(math.ceil(span * rate / step_max)) + 1)


def check_resolution(
    spacing: float, a: float, t_abs: float, xi_max: float, x_max: float,
    step_max: float = PHASE_STEP_MAX, span: float | None = None,
) -> None:
    step = phase_step(spacing, a, t_abs, xi_max, x_max)
    if step > step_max:
        hint = ""
        if span is not None:
            n_req = required_count(span, a, t_abs, xi_max, x_max, step_max)
            hint = f"; need at least {n_req} nodes over this span"
        raise ResolutionError(
            f"phase step dxi*(|t|*a*Xi^(a-1) + X) = {step:.6g} exceeds the "
            f"resolution bound {step_max:.6g} "
            f"(dxi={spacing:.6g}, |t|={t_abs:.6g}, a={a:.6g}, Xi={xi_max:.6g}, "
            f"X={x_max:.6g}){hint}"
        )


def halving_delta(full: np.ndarray, coarse: np.ndarray, floor: float = 0.0) -> float:
    """Max pointwise change between full- and half-resolution values,
    relative to the full-resolution sup (plus an optional absolute floor)."""
    full = np.asarray(full)
    coarse = np.asarray(coarse)
    scale = max(float(np.max(np.abs(full))), floor, 1e-300)
    return float(np.max(np.abs(full - coarse)) / scale)

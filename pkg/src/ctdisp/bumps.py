"""Smooth plateau bumps used as frequency profiles and cutoffs.

The construction is the classical exponential smooth step: with
psi(u) = e^{-1/u} for u > 0 (0 otherwise) and
sigma(u) = psi(u) / (psi(u) + psi(1-u)), the bump of outer radius R is
1 on [-R/2, R/2], sigma(2 (R - |xi|) / R) on the transition annulus and
0 beyond; it is smooth, even, and valued in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Bump", "make_bump", "smooth_step"]


def smooth_step(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly increasing between."""
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    if np.any(mid):
        um = u[mid]
        a = np.exp(-1.0 / um)
        b = np.exp(-1.0 / (1.0 - um))
        out[mid] = a / (a + b)
    return out


@dataclass(frozen=True)
class Bump:
    """Even plateau cutoff: 1 on [-R/2, R/2], supported in [-R, R]."""

    outer_radius: float

    def __post_init__(self):
        if not self.outer_radius > 0:
            raise ValueError(f"bump radius must be positive, got {self.outer_radius}")

    @property
    def plateau_radius(self) -> float:
        return 0.5 * self.outer_radius

    def __call__(self, xi) -> np.ndarray:
        r = np.abs(np.asarray(xi, dtype=np.float64))
        R = self.outer_radius
        return smooth_step(2.0 * (R - r) / R)


def make_bump(outer_radius: float) -> Bump:
    """Plateau bump of the given outer radius (plateau radius R/2)."""
    return Bump(outer_radius)

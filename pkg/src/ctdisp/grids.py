"""Grids, profiles, fields and evolution parameters.

Frequency-side data lives on uniform grids; a profile is treated as
identically zero outside its grid, so compactly supported smooth bumps
stand in for Schwartz data throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "EvolutionParams",
    "FrequencyGrid",
    "FrequencyProfile",
    "GridError",
    "SpatialField",
    "SpatialGrid",
    "TimeLadder",
]


class GridError(ValueError):
    """Raised when grid/profile invariants are violated."""


def _uniform_nodes(lo: float, hi: float, count: int) -> np.ndarray:
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid in the integration variable xi (units 1/length)."""

    xi_min: float
    xi_max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise GridError(f"frequency grid needs count >= 2, got {self.count}")
        if not (self.xi_min < self.xi_max):
            raise GridError(f"xi_min={self.xi_min} must be < xi_max={self.xi_max}")
        if not (np.isfinite(self.xi_min) and np.isfinite(self.xi_max)):
            raise GridError("grid endpoints must be finite")

    @classmethod
    def symmetric(cls, xi_max: float, count: int) -> "FrequencyGrid":
        """Grid on [-xi_max, xi_max]; count is forced odd so 0 is a node."""
        if xi_max <= 0:
            raise GridError(f"symmetric grid needs xi_max > 0, got {xi_max}")
        if count % 2 == 0:
            count += 1
        return cls(-xi_max, xi_max, count)

    @property
    def spacing(self) -> float:
        return (self.xi_max - self.xi_min) / (self.count - 1)

    @property
    def is_symmetric(self) -> bool:
        return np.isclose(self.xi_min, -self.xi_max)

    @property
    def max_abs(self) -> float:
        return max(abs(self.xi_min), abs(self.xi_max))

    def nodes(self) -> np.ndarray:
        return _uniform_nodes(self.xi_min, self.xi_max, self.count)

    def doubled(self) -> "FrequencyGrid":
        return FrequencyGrid(self.xi_min, self.xi_max, 2 * self.count - 1)

    def halved(self) -> "FrequencyGrid":
        if self.count % 2 == 0:
            raise GridError("halving requires an odd node count")
        return FrequencyGrid(self.xi_min, self.xi_max, (self.count + 1) // 2)


@dataclass(frozen=True)
class FrequencyProfile:
    """Samples of fhat on a frequency grid, zero off the grid.

    A profile built through :meth:`from_function` remembers its generating
    callable, which lets refinement loops resample it on finer grids.
    """

    grid: FrequencyGrid
    values: np.ndarray
    source: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.count,):
            raise GridError(
                f"profile has {vals.shape} values for a grid of {self.grid.count} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise GridError("profile values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(
        cls, fn: Callable[[np.ndarray], np.ndarray], grid: FrequencyGrid
    ) -> "FrequencyProfile":
        vals = np.asarray(fn(grid.nodes()), dtype=np.complex128)
        return cls(grid, vals, source=fn)

    def scaled(self, c: complex) -> "FrequencyProfile":
        src = self.source
        return FrequencyProfile(
            self.grid,
            c * self.values,
            source=(lambda xi, _s=src, _c=c: _c * _s(xi)) if src is not None else None,
        )

    def refined(self) -> "FrequencyProfile":
        """Resample on a grid with doubled resolution (requires a source)."""
        if self.source is None:
            raise GridError("cannot refine a sample-only profile (no source callable)")
        return FrequencyProfile.from_function(self.source, self.grid.doubled())

    def coarsened(self) -> "FrequencyProfile":
        """Drop every other node (grid count must be odd)."""
        return FrequencyProfile(self.grid.halved(), self.values[::2], source=self.source)

    def abs_mass(self) -> float:
        """Trapezoid quadrature of |fhat|, the trivial modulus bound."""
        from .quadrature import trapezoid_weights

        return float(np.sum(trapezoid_weights(self.grid.count, self.grid.spacing)
                            * np.abs(self.values)))


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid in the spatial variable x."""

    x_min: float
    x_max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise GridError(f"spatial grid needs count >= 2, got {self.count}")
        if not (self.x_min < self.x_max):
            raise GridError(f"x_min={self.x_min} must be < x_max={self.x_max}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.count - 1)

    @property
    def max_abs(self) -> float:
        return max(abs(self.x_min), abs(self.x_max))

    def nodes(self) -> np.ndarray:
        return _uniform_nodes(self.x_min, self.x_max, self.count)


@dataclass(frozen=True)
class SpatialField:
    """Complex samples on a spatial grid."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.count,):
            raise GridError(
                f"field has {vals.shape} values for a grid of {self.grid.count} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise GridError("field values must be finite")
        object.__setattr__(self, "values", vals)

    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


_SIGMA_MODES = ("none", "power", "explicit")


@dataclass(frozen=True)
class EvolutionParams:
    """Dispersion exponent a, time power gamma, and the damping rule.

    sigma_mode selects the damping coefficient multiplying |xi|^a:
    ``none`` gives the purely dispersive flow (sigma = 0), ``power`` gives
    sigma = t^gamma (complex time t + i t^gamma), ``explicit`` uses
    sigma_value as given.
    """

    a: float
    gamma: float = 1.0
    sigma_mode: str = "power"
    sigma_value: float = 0.0

    def __post_init__(self):
        if not self.a > 1:
            raise GridError(f"dispersion exponent a must exceed 1, got {self.a}")
        if not self.gamma > 0:
            raise GridError(f"gamma must be positive, got {self.gamma}")
        if self.sigma_mode not in _SIGMA_MODES:
            raise GridError(f"sigma_mode must be one of {_SIGMA_MODES}")
        if self.sigma_mode == "explicit" and self.sigma_value < 0:
            raise GridError("explicit sigma must be >= 0")

    def sigma_at(self, t: float) -> float:
        if self.sigma_mode == "none":
            return 0.0
        if self.sigma_mode == "power":
            return float(t) ** self.gamma
        return self.sigma_value


@dataclass(frozen=True)
class TimeLadder:
    """Discretisation of the time supremum over (0, 1)."""

    t_min: float
    t_max: float
    count: int
    scale: str = "geometric"

    def __post_init__(self):
        if not (0.0 < self.t_min < self.t_max < 1.0):
            raise GridError(
                f"ladder needs 0 < t_min < t_max < 1, got [{self.t_min}, {self.t_max}]"
            )
        if self.count < 1:
            raise GridError("ladder needs count >= 1")
        if self.scale not in ("geometric", "linear"):
            raise GridError("ladder scale must be 'geometric' or 'linear'")

    def times(self) -> np.ndarray:
        """Ladder nodes.  Fractions k/(count-1) are formed directly from
        integers, so a refinement to 2*count - 1 nodes reproduces the
        original nodes bitwise (sup over the refined ladder can then never
        drop below the coarse one)."""
        if self.count == 1:
            return np.array([self.t_min])
        fracs = np.arange(self.count, dtype=np.float64) / (self.count - 1)
        if self.scale == "geometric":
            lo, hi = np.log(self.t_min), np.log(self.t_max)
            out = np.exp(lo + fracs * (hi - lo))
        else:
            out = self.t_min + fracs * (self.t_max - self.t_min)
        out[0], out[-1] = self.t_min, self.t_max
        return out

    def refined(self) -> "TimeLadder":
        """Ladder with midpoints inserted (count -> 2*count - 1)."""
        return TimeLadder(self.t_min, self.t_max, 2 * self.count - 1, self.scale)


# ---------------------------------------------------------------------------
# serialization: CSV (coordinate, re, im) and JSON envelopes with grid metadata
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _samples_to_csv(coords: np.ndarray, values: np.ndarray) -> str:
    lines = ["coordinate,re,im"]
    for c, v in zip(coords, values):
        lines.append(f"{_fmt(c)},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def profile_to_csv(profile: FrequencyProfile) -> str:
    return _samples_to_csv(profile.grid.nodes(), profile.values)


def field_to_csv(fieldv: SpatialField) -> str:
    return _samples_to_csv(fieldv.grid.nodes(), fieldv.values)


def _samples_from_csv(text: str):
    rows = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not rows or rows[0].strip() != "coordinate,re,im":
        raise GridError("expected CSV header 'coordinate,re,im'")
    data = np.array(
        [[float(tok) for tok in ln.split(",")] for ln in rows[1:]], dtype=np.float64
    )
    if data.shape[0] < 2:
        raise GridError("need at least two samples")
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def profile_from_csv(text: str) -> FrequencyProfile:
    coords, vals = _samples_from_csv(text)
    grid = FrequencyGrid(float(coords[0]), float(coords[-1]), len(coords))
    return FrequencyProfile(grid, vals)


def field_from_csv(text: str) -> SpatialField:
    coords, vals = _samples_from_csv(text)
    grid = SpatialGrid(float(coords[0]), float(coords[-1]), len(coords))
    return SpatialField(grid, vals)


def profile_to_json(profile: FrequencyProfile) -> str:
    env = {
        "kind": "frequency_profile",
        "grid": {
            "xi_min": profile.grid.xi_min,
            "xi_max": profile.grid.xi_max,
            "count": profile.grid.count,
        },
        "values": {
            "re": [float(v) for v in profile.values.real],
            "im": [float(v) for v in profile.values.imag],
        },
    }
    return json.dumps(env, sort_keys=True)


def field_to_json(fieldv: SpatialField) -> str:
    env = {
        "kind": "spatial_field",
        "grid": {
            "x_min": fieldv.grid.x_min,
            "x_max": fieldv.grid.x_max,
            "count": fieldv.grid.count,
        },
        "values": {
            "re": [float(v) for v in fieldv.values.real],
            "im": [float(v) for v in fieldv.values.imag],
        },
    }
    return json.dumps(env, sort_keys=True)


def profile_from_json(text: str) -> FrequencyProfile:
    env = json.loads(text)
    if env.get("kind") != "frequency_profile":
        raise GridError("JSON envelope is not a frequency_profile")
    g = env["grid"]
    vals = np.asarray(env["values"]["re"]) + 1j * np.asarray(env["values"]["im"])
    return FrequencyProfile(FrequencyGrid(g["xi_min"], g["xi_max"], g["count"]), vals)


def field_from_json(text: str) -> SpatialField:
    env = json.loads(text)
    if env.get("kind") != "spatial_field":
        raise GridError("JSON envelope is not a spatial_field")
    g = env["grid"]
    vals = np.asarray(env["values"]["re"]) + 1j * np.asarray(env["values"]["im"])
    return SpatialField(SpatialGrid(g["x_min"], g["x_max"], g["count"]), vals)

"""Run configuration: flat key=value files plus --set overrides.

Every key has a default; unknown keys are an error.  Values are parsed
by the declared type of the default (floats, ints, bools, strings, and
comma-separated float lists).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import List, Tuple

__all__ = ["ConfigError", "RunConfig"]


class ConfigError(ValueError):
    """Unknown key or malformed value in a configuration source."""


def _float_list(text: str) -> Tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


@dataclass(frozen=True)
class RunConfig:
    """Defaults for every tunable of the library and the CLI sweeps."""

    # kernel backend and reproducibility
    backend: str = "auto"                    # auto | numba | numpy
    seed: int = 12345

    # quadrature policy
    phase_step_max: float = math.pi / 4
    resolution_safety: float = 2.0
    propagator_rel_tol: float = 1e-6
    norm_rel_tol: float = 1e-4
    grid_node_cap: int = 1 << 24
    certify: bool = True

    # operator parameters
    a: float = 2.0
    gamma: float = 2.0
    alpha: float = 0.55
    sigma_mode: str = "power"                # none | power | explicit
    sigma_value: float = 0.0

    # time ladder for maximal fields
    ladder_t_min: float = 1e-4
    ladder_t_max: float = 0.9999
    ladder_count: int = 512
    ladder_scale: str = "geometric"
    ladder_l2_tol: float = 0.01

    # weak quasinorm ladder
    weak_lambda_count: int = 200
    weak_lambda_floor: float = 1e-4

    # grid-as-line policing
    tail_mass_limit: float = 1e-3

    # stationary-phase cut constants and Van der Corput constants
    cut_delta: float = 0.125
    cut_big_k: float = 8.0
    cut_c0: float = 8.0
    vdc_c1: float = 3.0
    vdc_c2: float = 8.0

    # envelope study
    envelope_x_min: float = 1e-3
    envelope_x_max: float = 1e2
    envelope_x_count: int = 61
    envelope_pair_count: int = 12
    envelope_diag_count: int = 6
    envelope_t_floor: float = 1e-3
    envelope_n_ladder: Tuple[float, ...] = (4.0, 16.0, 64.0, 256.0)
    envelope_n_diag: Tuple[float, ...] = (1024.0, 4096.0)
    envelope_wide_factor: float = 2.0

    # counterexample family
    v0: float = 0.5
    v_list: Tuple[float, ...] = (0.2, 0.1, 0.05)
    s_list: Tuple[float, ...] = ()           # empty: auto ladder around s_crit
    window_x_count: int = 257
    sharpness_ladder_count: int = 512
    f_max_cap: float = 1.0
    g_max_cap: float = 2.0

    # convergence sweeps
    convergence_mode: str = "smooth"         # smooth | family
    conv_t_min: float = 1e-4
    conv_t_max: float = 0.1
    conv_t_count: int = 13
    family_t_min: float = 1e-6
    family_t_count: int = 256
    family_s_list: Tuple[float, ...] = (0.1, 0.3)
    # smaller v than the sharpness ladder: the local deviation statistic
    # carries a wide overlap transient until the bump core leaves [-1, 1]
    family_v_list: Tuple[float, ...] = (0.1, 0.05, 0.025)

    # domination / convolution checks
    dom_g_power: float = 3.0
    dom_h_power: float = 2.0
    dom_grid_extent: float = 16.0
    dom_grid_count: int = 513
    dom_ladder_t_min: float = 0.05
    dom_ladder_t_max: float = 0.9
    dom_ladder_count: int = 32
    dom_eps_scale: float = 1e-3
    dom_ratio_cap: float = 10.0

    # kernel table policy
    kernel_tail: float = 1e-12
    kernel_tol: float = 1e-9

    # trend thresholds (the theorems are asymptotic; acceptance is trends)
    trend_slope_tol: float = 0.1
    trend_factor: float = 2.0

    # phase-diagram lattice
    lattice_a_min: float = 1.25
    lattice_a_max: float = 4.0
    lattice_a_count: int = 20
    lattice_gamma_min: float = 0.25
    lattice_gamma_max: float = 6.0
    lattice_gamma_count: int = 20

    def s_ladder(self) -> Tuple[float, ...]:
        """Configured s values, or the bracket around the critical index:
        {0, crit/4, crit/2, 3 crit/4, crit, crit + 0.05}."""
        if self.s_list:
            return self.s_list
        from .exponents import critical_exponent

        crit = critical_exponent(self.a, self.gamma)
        return (0.0, 0.25 * crit, 0.5 * crit, 0.75 * crit, crit, crit + 0.05)

    # -- parsing ------------------------------------------------------------

    def with_overrides(self, pairs: List[str]) -> "RunConfig":
        """Apply key=value overrides (the --set flag)."""
        updates = {}
        for item in pairs:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not of the form key=value")
            key, _, raw = item.partition("=")
            updates[key.strip()] = raw.strip()
        return self._apply(updates)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        base = cls()
        updates = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, raw = line.partition("=")
                updates[key.strip()] = raw.strip()
        return base._apply(updates)

    def _apply(self, updates: dict) -> "RunConfig":
        known = {f.name: f for f in fields(self)}
        parsed = {}
        for key, raw in updates.items():
            if key not in known:
                raise ConfigError(f"unknown configuration key {key!r}")
            default = getattr(self, key)
            try:
                if isinstance(default, bool):
                    parsed[key] = raw.lower() in ("1", "true", "yes", "on")
                elif isinstance(default, int):
                    parsed[key] = int(raw)
                elif isinstance(default, float):
                    parsed[key] = float(raw)
                elif isinstance(default, tuple):
                    parsed[key] = _float_list(raw)
                else:
                    parsed[key] = raw
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc
        from dataclasses import replace

        return replace(self, **parsed)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            out[f.name] = list(val) if isinstance(val, tuple) else val
        return out

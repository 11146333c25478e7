"""Sweep drivers behind the CLI subcommands.

Each driver consumes a :class:`~ctdisp.config.RunConfig` and returns
plain rows plus a JSON-able summary; CSV headers are fixed per command
and floats are emitted with 12 significant digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .backends import active_backend, set_backend
from .bumps import make_bump
from .config import RunConfig
from .counterexample import (
    ExperimentRecord,
    InfeasibleGridError,
    blow_up_trials,
    make_instance,
    optimal_time,
)
from .exponents import critical_exponent, gamma_critical, local_critical_exponent
from .grids import (
    EvolutionParams,
    FrequencyGrid,
    FrequencyProfile,
    SpatialField,
    SpatialGrid,
    TimeLadder,
)
from .kernel_oracle import EnvelopeReport, default_probe_corpus, envelope_l1_estimate
from .norms import sobolev_norm, weak_l2_quasinorm
from .propagator import evolution_table, synthesize
from .quadrature import required_count
from .serialize import rows_to_csv
from .smoothing import DominationReport, domination_check

__all__ = [
    "SHARPNESS_HEADER",
    "PHASE_DIAGRAM_HEADER",
    "CONV_SMOOTH_HEADER",
    "CONV_FAMILY_HEADER",
    "SweepResult",
    "convergence_sweep",
    "domination_report",
    "exponent_rows",
    "kernel_probe_report",
    "phase_diagram_rows",
    "sharpness_scan",
]

SHARPNESS_HEADER = ExperimentRecord.CSV_HEADER
PHASE_DIAGRAM_HEADER = "a,gamma,s_crit,s_crit_local,gamma_critical"
CONV_SMOOTH_HEADER = "a,gamma,t,sup_deviation,rel_deviation"
CONV_FAMILY_HEADER = "a,gamma,s,v,weak_sup_dev,sobolev_norm,quotient,t_max"
EXPONENT_HEADER = "a,gamma,s_crit,s_crit_local,gamma_critical"


@dataclass
class SweepResult:
    csv: str
    summary: dict
    ok: bool  # exit-code contract: False only for failed internal checks


def _apply_backend(cfg: RunConfig) -> None:
    set_backend(cfg.backend)


def exponent_rows(cfg: RunConfig) -> SweepResult:
    row = (
        cfg.a,
        cfg.gamma,
        critical_exponent(cfg.a, cfg.gamma),
        local_critical_exponent(cfg.a, cfg.gamma),
        gamma_critical(cfg.a),
    )
    return SweepResult(
        csv=rows_to_csv(EXPONENT_HEADER, [row]),
        summary={
            "a": cfg.a,
            "gamma": cfg.gamma,
            "s_crit": row[2],
            "s_crit_local": row[3],
            "gamma_critical": row[4],
        },
        ok=True,
    )


def phase_diagram_rows(cfg: RunConfig) -> SweepResult:
    rows = []
    for a in np.linspace(cfg.lattice_a_min, cfg.lattice_a_max, cfg.lattice_a_count):
        for g in np.linspace(
            cfg.lattice_gamma_min, cfg.lattice_gamma_max, cfg.lattice_gamma_count
        ):
            rows.append(
                (
                    float(a),
                    float(g),
                    critical_exponent(a, g),
                    local_critical_exponent(a, g),
                    gamma_critical(a),
                )
            )
    return SweepResult(
        csv=rows_to_csv(PHASE_DIAGRAM_HEADER, rows),
        summary={"rows": len(rows)},
        ok=True,
    )


def sharpness_scan(cfg: RunConfig) -> SweepResult:
    """Blow-up trials over the configured (s, v) ladders.

    Per-instance infeasibility (grid cap) is recorded in the summary and
    skipped; the exit flag is False iff an emitted row fails the phase or
    damping check."""
    _apply_backend(cfg)
    records: List[ExperimentRecord] = []
    skipped = []
    for v in cfg.v_list:
        try:
            inst = make_instance(
                v, cfg.a, cfg.gamma, v0=cfg.v0,
                node_cap=cfg.grid_node_cap, safety=cfg.resolution_safety,
                step_max=cfg.phase_step_max,
            )
            records.extend(
                blow_up_trials(
                    inst, cfg.s_ladder(),
                    x_count=cfg.window_x_count,
                    ladder_count=cfg.sharpness_ladder_count,
                    certify=cfg.certify,
                    quad_tol=cfg.norm_rel_tol,
                    ladder_tol=cfg.ladder_l2_tol,
                    f_cap=cfg.f_max_cap, g_cap=cfg.g_max_cap,
                )
            )
        except InfeasibleGridError as exc:
            skipped.append({"v": v, "reason": str(exc)})
    ok = all(r.checks_pass for r in records)
    csv = "\n".join([SHARPNESS_HEADER] + [r.csv_row() for r in records]) + "\n"
    summary = {
        "a": cfg.a,
        "gamma": cfg.gamma,
        "s_values": list(cfg.s_ladder()),
        "v_values": list(cfg.v_list),
        "rows": [r.summary() for r in records],
        "skipped": skipped,
        "checks_pass": ok,
        "backend": active_backend(),
    }
    return SweepResult(csv=csv, summary=summary, ok=ok)


def _smooth_profile(cfg: RunConfig, t_max: float, x_max: float) -> FrequencyProfile:
    radius = 6.0
    n = max(
        required_count(2 * radius, cfg.a, t_max, radius, x_max,
                       cfg.phase_step_max / cfg.resolution_safety),
        257,
    )
    if n % 2 == 0:
        n += 1
    return FrequencyProfile.from_function(
        lambda xi: np.exp(-np.asarray(xi) ** 2), FrequencyGrid.symmetric(radius, n)
    )


def convergence_sweep(cfg: RunConfig) -> SweepResult:
    _apply_backend(cfg)
    if cfg.convergence_mode == "smooth":
        return _convergence_smooth(cfg)
    if cfg.convergence_mode == "family":
        return _convergence_family(cfg)
    raise ValueError(f"unknown convergence mode {cfg.convergence_mode!r}")


def _convergence_smooth(cfg: RunConfig) -> SweepResult:
    xs = SpatialGrid(-1.0, 1.0, 201)
    profile = _smooth_profile(cfg, cfg.conv_t_max, xs.max_abs)
    base = synthesize(profile, xs)
    peak = base.max_abs()
    ts = np.geomspace(cfg.conv_t_min, cfg.conv_t_max, cfg.conv_t_count)
    params = EvolutionParams(a=cfg.a, gamma=cfg.gamma, sigma_mode=cfg.sigma_mode,
                             sigma_value=cfg.sigma_value)
    sigmas = np.array([params.sigma_at(t) for t in ts])
    table = evolution_table(profile, cfg.a, ts, sigmas, xs)
    rows = []
    for r, t in enumerate(ts):
        dev = float(np.max(np.abs(table[r] - base.values)))
        rows.append((cfg.a, cfg.gamma, float(t), dev, dev / peak))
    devs = [row[3] for row in rows]
    monotone = all(devs[i] <= devs[i + 1] * (1 + 1e-9) for i in range(len(devs) - 1))
    ok = monotone and rows[0][4] <= 1e-3
    summary = {
        "mode": "smooth",
        "a": cfg.a,
        "gamma": cfg.gamma,
        "peak": peak,
        "monotone_decay": monotone,
        "smallest_t_rel_deviation": rows[0][4],
        "checks_pass": ok,
        "backend": active_backend(),
    }
    return SweepResult(csv=rows_to_csv(CONV_SMOOTH_HEADER, rows), summary=summary, ok=ok)


def _convergence_family(cfg: RunConfig) -> SweepResult:
    xs = SpatialGrid(-1.0, 1.0, cfg.window_x_count)
    params = EvolutionParams(a=cfg.a, gamma=cfg.gamma, sigma_mode="power")
    rows = []
    skipped = []
    for s in cfg.family_s_list:
        for v in cfg.family_v_list:
            try:
                x_top = min(1.0, v ** (2.0 * cfg.a / cfg.gamma - 2.0 * (cfg.a - 1.0)))
                t_max = 2.0 * optimal_time(x_top, v, cfg.a)
                inst = make_instance(
                    v, cfg.a, cfg.gamma, v0=cfg.v0, t_max=t_max, x_extent=1.0,
                    node_cap=cfg.grid_node_cap, safety=cfg.resolution_safety,
                    step_max=cfg.phase_step_max,
                )
            except InfeasibleGridError as exc:
                skipped.append({"s": s, "v": v, "reason": str(exc)})
                continue
            base = synthesize(inst.profile, xs)
            ts = np.geomspace(cfg.family_t_min, t_max, cfg.family_t_count)
            sigmas = ts**cfg.gamma
            table = evolution_table(inst.profile, cfg.a, ts, sigmas, xs)
            sup_dev = np.max(np.abs(table - base.values[None, :]), axis=0)
            weak = weak_l2_quasinorm(
                SpatialField(xs, sup_dev.astype(np.complex128)), (-1.0, 1.0),
                lambda_count=cfg.weak_lambda_count,
                lambda_floor=cfg.weak_lambda_floor,
            )
            sob = sobolev_norm(inst.profile, s, homogeneous=False)
            rows.append((cfg.a, cfg.gamma, float(s), float(v), weak, sob,
                         weak / sob, t_max))
    summary = {
        "mode": "family",
        "a": cfg.a,
        "gamma": cfg.gamma,
        "s_values": list(cfg.family_s_list),
        "v_values": list(cfg.family_v_list),
        "skipped": skipped,
        "checks_pass": True,
        "backend": active_backend(),
    }
    return SweepResult(csv=rows_to_csv(CONV_FAMILY_HEADER, rows), summary=summary,
                       ok=True)


def kernel_probe_report(cfg: RunConfig) -> Tuple[SweepResult, EnvelopeReport]:
    _apply_backend(cfg)
    corpus = default_probe_corpus(
        pair_count=cfg.envelope_pair_count,
        diag_count=cfg.envelope_diag_count,
        t_floor=cfg.envelope_t_floor,
        n_ladder=cfg.envelope_n_ladder,
        n_diag=cfg.envelope_n_diag,
        seed=cfg.seed,
    )
    report = envelope_l1_estimate(
        cfg.a, cfg.gamma, cfg.alpha,
        x_min=cfg.envelope_x_min, x_max=cfg.envelope_x_max,
        x_count=cfg.envelope_x_count,
        samples=corpus,
        wide_factor=cfg.envelope_wide_factor,
        certify=cfg.certify,
        quad_tol=cfg.norm_rel_tol,
        seed=cfg.seed,
    )
    summary = report.summary()
    summary["backend"] = active_backend()
    csv = "\n".join(report.csv_rows()) + "\n"
    return SweepResult(csv=csv, summary=summary, ok=True), report


def domination_report(cfg: RunConfig) -> Tuple[SweepResult, DominationReport]:
    _apply_backend(cfg)
    if cfg.dom_g_power < cfg.dom_h_power:
        raise ValueError(
            "need g <= h on (0,1): dom_g_power must be >= dom_h_power"
        )
    xs = SpatialGrid(-cfg.dom_grid_extent, cfg.dom_grid_extent, cfg.dom_grid_count)
    profile = _smooth_profile(cfg, cfg.dom_ladder_t_max, xs.max_abs)
    ladder = TimeLadder(cfg.dom_ladder_t_min, cfg.dom_ladder_t_max,
                        cfg.dom_ladder_count, "geometric")
    report = domination_check(
        profile, cfg.a,
        lambda t: t**cfg.dom_g_power,
        lambda t: t**cfg.dom_h_power,
        ladder, xs, eps_scale=cfg.dom_eps_scale, refine=True,
    )
    ok = report.max_ratio <= cfg.dom_ratio_cap
    summary = report.summary()
    summary.update({
        "a": cfg.a,
        "g_power": cfg.dom_g_power,
        "h_power": cfg.dom_h_power,
        "ratio_cap": cfg.dom_ratio_cap,
        "checks_pass": ok,
        "backend": active_backend(),
    })
    rows = [(cfg.a, cfg.dom_g_power, cfg.dom_h_power, report.max_ratio,
             report.max_ratio_refined, report.refinement_delta)]
    csv = rows_to_csv("a,g_power,h_power,max_ratio,max_ratio_refined,refinement_delta",
                      rows)
    return SweepResult(csv=csv, summary=summary, ok=ok), report

"""Acceptance suite: one test per criterion, each printing a PASS line.

The underlying statements are asymptotic operator bounds, so acceptance
mixes exact formula checks, closed-form analytic oracles, and trend
suites with pinned tolerances.  Run with ``pytest -s tests/test_acceptance.py``
to see the per-criterion lines.
"""

import cmath
import math
import subprocess
import sys

import numpy as np
import pytest

from ctdisp.config import RunConfig
from ctdisp.counterexample import blow_up_trials, make_instance
from ctdisp.exponents import critical_exponent, gamma_critical, local_critical_exponent
from ctdisp.experiments import convergence_sweep, domination_report
from ctdisp.grids import (
    EvolutionParams,
    FrequencyGrid,
    FrequencyProfile,
    SpatialGrid,
    TimeLadder,
)
from ctdisp.kernel_oracle import (
    KernelProbeParams,
    envelope_l1_estimate,
    h_eps_derivative_bounds,
    probe_table,
    region_split,
    restricted_probe_integral,
    vdc_certificate,
)
from ctdisp.maximal import maximal_field
from ctdisp.norms import sobolev_norm
from ctdisp.propagator import evaluate_evolution, synthesize
from ctdisp.smoothing import convolution_identity_check, kernel_K


def _report(n: int, text: str) -> None:
    print(f"ACCEPTANCE {n} PASS: {text}")


def gaussian_profile(radius=6.0, count=513):
    return FrequencyProfile.from_function(
        lambda xi: np.exp(-np.asarray(xi) ** 2), FrequencyGrid.symmetric(radius, count)
    )


# -- 1: exponent formulas ------------------------------------------------------

def test_acceptance_1_exponent_formulas():
    assert critical_exponent(2.0, 2.0) == 0.25
    for g in (0.1, 0.5, 1.0):
        assert critical_exponent(2.0, g) == 0.0
    assert critical_exponent(2.0, 4.0) == 0.375 == 0.5 - 1.0 / (2.0 * 4.0)
    for a in np.linspace(1.05, 5.0, 20):
        for g in np.linspace(0.1, 8.0, 20):
            assert local_critical_exponent(a, g) == min(critical_exponent(a, g), 0.25)
    assert gamma_critical(2.0) == 2.0
    _report(1, "critical indices exact (1/4 at (2,2); 0 for gamma <= 1; "
               "3/8 at (2,4); min-rule on 20x20 lattice)")


# -- 2: Gaussian oracles --------------------------------------------------------

def test_acceptance_2_gaussian_oracles():
    prof = gaussian_profile(radius=6.5, count=769)
    sample = [
        (0.05, 0.0, 0.0), (0.1, 0.0, 1.0), (0.2, 0.1, -1.5), (0.3, 0.5, 2.0),
        (0.4, 1.0, -2.5), (0.5, 0.0, 0.5), (0.6, 0.2, -0.3), (0.7, 0.05, 1.7),
        (0.9, 2.0, -1.0), (0.99, 0.01, 2.2),
    ]
    worst = 0.0
    for t, sigma, x in sample:
        params = EvolutionParams(a=2.0, sigma_mode="explicit", sigma_value=sigma)
        fld = evaluate_evolution(prof, params, t, SpatialGrid(x - 0.1, x + 0.1, 3))
        c = 1.0 + sigma - 1j * t
        oracle = cmath.sqrt(math.pi / c) * cmath.exp(-x * x / (4 * c))
        worst = max(worst, abs(fld.values[1] - oracle) / abs(oracle))
    assert worst < 1e-6

    xs = SpatialGrid(-10.0, 10.0, 401)
    K2 = kernel_K(2.0, xs)
    exact = np.exp(-xs.nodes() ** 2 / 4) / (2 * math.sqrt(math.pi))
    kdev = float(np.max(np.abs(K2.values.real - exact)))
    assert kdev < 1e-6

    for a in (1.5, 2.0, 3.0):
        K0 = kernel_K(a, SpatialGrid(-1.0, 1.0, 3)).values[1].real
        target = math.gamma(1.0 / a + 1.0) / math.pi
        assert abs(K0 - target) / target < 1e-8
    _report(2, f"complex-Gaussian propagator rel err {worst:.2e} <= 1e-6 on 10 "
               f"samples; kernel a=2 sup dev {kdev:.2e} <= 1e-6; K(0) matches "
               f"Gamma(1/a+1)/pi to 1e-8 for a in {{1.5, 2, 3}}")


# -- 3 and 4: sharpness trends ---------------------------------------------------

def _sharpness_suite(n: int, a: float, gamma: float):
    vs = np.array([0.2, 0.1, 0.05])
    s_slopes = (0.0, 0.125, 0.25)
    crit = critical_exponent(a, gamma)
    assert crit == pytest.approx(0.25)

    instances = [make_instance(float(v), a, gamma) for v in vs]

    # (i) log-log slope of the squared homogeneous norm: a - 4s - a/gamma = 1 - 4s
    for s in s_slopes:
        sq = [sobolev_norm(inst.profile, s, homogeneous=True) ** 2 for inst in instances]
        slope = float(np.polyfit(np.log(vs), np.log(sq), 1)[0])
        target = 1.0 - 4.0 * s
        assert abs(slope - target) <= 0.1 * max(1.0, abs(target)), (s, slope)

    # (ii) window lower bound within a factor 2 of constant,
    # (iii) ratio trends across the v-ladder
    recs = {s: [] for s in (0.0, 0.125, 0.25, 0.3)}
    for inst in instances:
        for r in blow_up_trials(inst, list(recs)):
            recs[r.s].append(r)
    lows = [r.window_l2_lower for r in recs[0.0]]
    assert max(lows) / min(lows) <= 2.0

    for s in (0.0, 0.125):
        ratios = [r.ratio for r in recs[s]]
        slope = float(np.polyfit(np.log(vs), np.log(ratios), 1)[0])
        target = -(1.0 - 4.0 * s) / 2.0
        assert abs(slope - target) <= 0.1, (s, slope, target)
    for s in (0.25, 0.3):
        ratios = [r.ratio for r in recs[s]]
        assert max(ratios) / min(ratios) <= 2.0, (s, ratios)
    _report(n, f"(a, gamma) = ({a}, {gamma}): norm-scaling slopes match 1-4s "
               f"within 10%, window lower bound constant within factor 2, ratio "
               f"slopes -(1-4s)/2 within 0.1 for s < 1/4 and bounded at s >= 1/4")


def test_acceptance_3_sharpness_a2_gamma2():
    _sharpness_suite(3, 2.0, 2.0)


def test_acceptance_4_sharpness_a3_gamma32():
    _sharpness_suite(4, 3.0, 1.5)


# -- 5: envelope study ------------------------------------------------------------

def test_acceptance_5_kernel_envelope():
    rep = envelope_l1_estimate(2.0, 2.0, 0.55, certify=True)
    assert rep.large_slope <= -1.05, rep.large_slope
    assert -0.55 <= rep.small_slope <= -0.35, rep.small_slope
    assert rep.mass_change < 0.05, rep.mass_change
    assert rep.quad_delta <= 1e-4
    _report(5, f"envelope (2, 2, alpha=0.55): small-x slope "
               f"{rep.small_slope:.3f} in [-0.55, -0.35], large-x slope "
               f"{rep.large_slope:.2f} <= -1.05, L1 mass drift "
               f"{100 * rep.mass_change:.2f}% < 5% under range doubling")


# -- 6: Van der Corput domination ---------------------------------------------------

def test_acceptance_6_vdc_certificates_dominate():
    rng = np.random.default_rng(2024)
    checked = 0
    attempts = 0
    while checked < 200:
        attempts += 1
        assert attempts < 4000
        t1, t2 = (float(u) for u in rng.uniform(0.02, 0.98, 2))
        if abs(t1 - t2) < 2e-3:
            continue
        x = float(10.0 ** rng.uniform(-0.5, 1.4))
        a = float(rng.choice([1.5, 2.0, 2.5, 3.0]))
        p = KernelProbeParams(a, 2.0, 0.55, float(rng.choice([8.0, 16.0, 32.0])),
                              t1, t2)
        sp = region_split(p, x)
        if sp.degenerate:
            continue
        lo, mid, hi = sp.boundaries
        top = p.N * p.mu_radius
        if hi < top:
            cert = vdc_certificate(p, x, (hi, top), 1)
            assert cert >= abs(restricted_probe_integral(p, x, (hi, top)))
            checked += 1
        if mid < min(hi, top) and checked < 200:
            cert = vdc_certificate(p, x, (mid, min(hi, top)), 2)
            assert cert >= abs(restricted_probe_integral(p, x, (mid, min(hi, top))))
            checked += 1
    _report(6, f"{checked} randomized Van der Corput certificates dominate their "
               f"restricted quadrature integrals with zero violations")


# -- 7: kernel/domination lemma suite -------------------------------------------------

def test_acceptance_7_smoothing_suite():
    prof = gaussian_profile()
    xs = SpatialGrid(-16.0, 16.0, 1025)
    lad = TimeLadder(0.05, 0.9, 6)
    conv = convolution_identity_check(prof, 2.0, lambda t: t**3, lambda t: t**2,
                                      lad, xs)
    assert conv.rel_deviation <= 1e-6, conv.rel_deviation

    cfg = RunConfig().with_overrides(["dom_grid_count=257", "dom_ladder_count=16"])
    res, dom = domination_report(cfg)
    assert dom.max_ratio <= 10.0
    assert dom.refinement_delta <= 0.2

    rng = np.random.default_rng(99)
    for _ in range(1000):
        a = float(rng.uniform(1.01, 6.0))
        eps = float(10.0 ** rng.uniform(-6, 3))
        xi = float(rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-3, 3))
        h_eps_derivative_bounds(a, eps, xi)
    _report(7, f"convolution identity rel dev {conv.rel_deviation:.2e} <= 1e-6; "
               f"domination ratio {dom.max_ratio:.3f} <= 10 with refinement drift "
               f"{100 * dom.refinement_delta:.3f}% <= 20%; damping-derivative "
               f"bounds hold on 1000 samples across eps in [1e-6, 1e3]")


# -- 8: convergence to initial data ----------------------------------------------------

def test_acceptance_8_convergence():
    smooth = convergence_sweep(RunConfig())
    assert smooth.ok
    assert smooth.summary["monotone_decay"]
    assert smooth.summary["smallest_t_rel_deviation"] <= 1e-3

    fam = convergence_sweep(RunConfig().with_overrides(
        ["convergence_mode=family", "window_x_count=129", "family_t_count=128"]
    ))
    rows = [ln.split(",") for ln in fam.csv.strip().splitlines()[1:]]
    by_s = {}
    for r in rows:
        by_s.setdefault(float(r[2]), []).append(float(r[6]))
    growth = by_s[0.1]
    assert growth == sorted(growth) and growth[-1] > growth[0]
    sat = by_s[0.3]
    assert max(sat) / min(sat) <= 2.0
    _report(8, f"smooth mode decays monotonically to "
               f"{smooth.summary['smallest_t_rel_deviation']:.1e} of peak at "
               f"t = 1e-4; family quotient grows for s = 0.1 "
               f"({growth[0]:.2f} -> {growth[-1]:.2f}) and stays within factor 2 "
               f"for s = 0.3")


# -- 9: infrastructure ------------------------------------------------------------------

def test_acceptance_9_determinism_and_certificates(tmp_path):
    args = [sys.executable, "-m", "ctdisp.cli", "sharpness-scan",
            "--set", "v_list=0.2,0.1", "--set", "s_list=0,0.25",
            "--set", "window_x_count=65", "--set", "sharpness_ladder_count=64"]
    blobs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.csv"
        r = subprocess.run(args + ["--out", str(out)], capture_output=True)
        assert r.returncode == 0, r.stderr
        blobs.append(out.read_bytes() + (tmp_path / f"{tag}.csv.summary.json").read_bytes())
    assert blobs[0] == blobs[1]

    # halving certificates across the quadrature surfaces
    prof = gaussian_profile()
    xs = SpatialGrid(-3.0, 3.0, 41)
    _, cert = synthesize(prof, xs, certify=True)
    assert cert.passed
    _, cert = evaluate_evolution(
        prof, EvolutionParams(a=2.0, gamma=2.0, sigma_mode="power"), 0.5, xs,
        certify=True,
    )
    assert cert.passed
    _, quad_cert, ladder_cert = maximal_field(
        prof, EvolutionParams(a=2.0, gamma=2.0, sigma_mode="power"),
        TimeLadder(1e-3, 0.9, 64), xs, certify=True,
    )
    assert quad_cert.passed and ladder_cert.passed
    p = KernelProbeParams(2.0, 2.0, 0.55, 16.0, 0.7, 0.2)
    _, probe_cert = probe_table(p, [(0.7, 0.2)], np.array([0.5, 2.0]), certify=True)
    assert probe_cert.passed
    _, k_cert = kernel_K(2.0, SpatialGrid(-5.0, 5.0, 21), certify=True)
    assert k_cert.passed
    _report(9, "byte-identical CSV+JSON across repeated CLI runs; halving "
               "certificates pass on synthesis, evolution, maximal field, "
               "kernel probe and damping kernel quadratures")

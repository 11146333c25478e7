import math

import numpy as np
import pytest

from ctdisp.kernel_oracle import (
    KernelProbeParams,
    envelope_l1_estimate,
    default_probe_corpus,
    h_eps_derivative_bounds,
    j2_decay_exponent,
    phase_d1,
    phase_d2,
    phase_d3,
    phase_value,
    probe_envelope,
    probe_integral,
    region_split,
    region_split_at,
    restricted_probe_integral,
    stationary_point,
    vdc_certificate,
)


# -- stationary point and region geometry -----------------------------------

def test_stationary_point_examples():
    assert stationary_point(2.0, 1.0, 2.0) == pytest.approx(1.0)
    assert stationary_point(2.0, 1.0, 4.0) == pytest.approx(2.0)
    assert stationary_point(3.0, 1.0, 3.0) == pytest.approx(1.0)
    assert stationary_point(2.0, 0.5, 0.0) == 0.0


def test_stationary_point_zeroes_the_phase_derivative():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a = rng.uniform(1.1, 4.0)
        t = rng.uniform(0.01, 1.0)
        x = rng.uniform(0.1, 50.0)
        rho = stationary_point(a, t, x)
        assert abs(phase_d1(a, t, x, rho)) <= 1e-12 * abs(x)


def test_region_split_example():
    rs = region_split_at(2.0, 1.0, 4.0, delta=0.125, big_k=8.0)
    assert rs.rho == pytest.approx(2.0)
    assert rs.boundaries == pytest.approx((0.25, 0.25, 16.0))  # I1 degenerate-empty
    assert rs.branch == "small_x"
    assert not rs.degenerate


def test_region_split_large_x_branch():
    rs = region_split_at(2.0, 0.5, 20.0, delta=0.125, big_k=8.0)
    assert rs.branch == "large_x"
    assert rs.boundaries[0] == 1.0


def test_region_split_degenerate_when_times_coincide():
    p = KernelProbeParams(2.0, 2.0, 0.55, 8.0, 0.4, 0.4)
    rs = region_split(p, 3.0)
    assert rs.degenerate


def test_region_split_rescales_cut_constants_for_small_a():
    rs = region_split_at(1.2, 0.5, 2.0)
    assert rs.delta ** (1.2 - 1.0) <= 0.5 + 1e-12
    assert rs.big_k ** (1.2 - 1.0) >= 2.0 - 1e-12


def test_rho_homogeneity():
    # x -> lam^(a-1) (t a) rho0^(a-1) parametrises rho = lam rho0
    a, t, rho0 = 2.5, 0.3, 1.7
    for lam in (0.5, 2.0, 7.0):
        x = (lam * rho0) ** (a - 1.0) * t * a
        assert stationary_point(a, t, x) == pytest.approx(lam * rho0, rel=1e-12)


# -- probe integrals ---------------------------------------------------------

def test_probe_gaussian_saturation_in_N():
    target = math.sqrt(math.pi / (2 * 0.3**2))
    prev = 0.0
    for N in (2.0, 4.0, 8.0, 32.0):
        p = KernelProbeParams(2.0, 2.0, 1e-12, N, 0.3, 0.3)
        val = probe_integral(p, 0.0).real
        assert val >= prev - 1e-12  # monotone saturation
        prev = val
    assert prev == pytest.approx(target, rel=1e-6)


def test_probe_modulus_maximal_at_origin_without_oscillation():
    p = KernelProbeParams(2.0, 2.0, 0.55, 16.0, 0.4, 0.4)
    v0 = abs(probe_integral(p, 0.0))
    for x in (0.3, 1.0, 4.0, 9.0):
        assert abs(probe_integral(p, x)) <= v0 + 1e-12


def test_probe_even_in_x_and_real_on_diagonal():
    p = KernelProbeParams(2.0, 2.0, 0.55, 16.0, 0.7, 0.2)
    for x in (0.5, 2.0, 7.0):
        assert probe_integral(p, x) == pytest.approx(probe_integral(p, -x), rel=1e-12)
    pd = KernelProbeParams(2.0, 2.0, 0.55, 16.0, 0.4, 0.4)
    for x in (0.5, 3.0):
        val = probe_integral(pd, x)
        # no oscillatory phase: the transform of an even real amplitude
        assert abs(val.imag) <= 1e-12 * abs(val)
        assert val == pytest.approx(probe_integral(pd, -x).conjugate(), rel=1e-12)


def test_probe_params_validation_and_flags():
    with pytest.raises(ValueError):
        KernelProbeParams(0.9, 2.0, 0.5, 4.0, 0.3, 0.3)
    with pytest.raises(ValueError):
        KernelProbeParams(2.0, 2.0, 0.5, 4.0, 0.0, 0.3)
    ok = KernelProbeParams(2.0, 2.0, 0.55, 4.0, 0.3, 0.2)
    assert ok.hypothesis_flags()["satisfied"]
    bad = KernelProbeParams(2.0, 4.0, 0.5, 4.0, 0.3, 0.2)  # below 0.75 critical
    flags = bad.hypothesis_flags()
    assert not flags["alpha_above_critical"] and not flags["satisfied"]


# -- Van der Corput certificates ---------------------------------------------

def test_vdc_zero_amplitude_interval():
    p = KernelProbeParams(2.0, 2.0, 0.55, 4.0, 0.8, 0.1)
    # beyond the cutoff support mu(xi/N): G vanishes identically
    interval = (4.5, 6.0)
    cert = vdc_certificate(p, 3.0, interval, 1)
    assert cert == 0.0
    assert abs(restricted_probe_integral(p, 3.0, interval)) < 1e-15


def test_vdc_certificate_linear_in_amplitude():
    p = KernelProbeParams(2.0, 2.0, 0.55, 4.0, 0.8, 0.1)
    interval = (0.5, 2.0)
    amp = lambda xi: np.exp(-(xi**2))
    c1 = vdc_certificate(p, 5.0, interval, 2, amplitude=amp)
    c2 = vdc_certificate(p, 5.0, interval, 2, amplitude=lambda xi: 2 * amp(xi))
    assert c2 == pytest.approx(2 * c1, rel=1e-12)


def test_vdc_rejects_sign_change_and_zero_second_derivative():
    p = KernelProbeParams(2.0, 2.0, 0.55, 8.0, 0.8, 0.1)
    rho = stationary_point(p.a, abs(p.t_osc), 3.0)
    with pytest.raises(ValueError, match="changes sign"):
        vdc_certificate(p, 3.0, (0.5 * rho, 2.0 * rho), 1)
    diag = KernelProbeParams(2.0, 2.0, 0.55, 8.0, 0.4, 0.4)
    with pytest.raises(ValueError, match="t1 = t2"):
        vdc_certificate(diag, 3.0, (1.0, 2.0), 2)


def test_vdc_dominates_randomized_instances():
    rng = np.random.default_rng(42)
    checked = 0
    while checked < 60:
        t1, t2 = rng.uniform(0.05, 0.95, 2)
        if abs(t1 - t2) < 5e-3:
            continue
        x = float(rng.uniform(0.3, 20.0))
        p = KernelProbeParams(2.0, 2.0, 0.55, 16.0, float(t1), float(t2))
        sp = region_split(p, x)
        lo, mid, hi = sp.boundaries
        top = p.N * p.mu_radius
        if hi < top:  # outer region: first-derivative certificate
            cert = vdc_certificate(p, x, (hi, top), 1)
            val = abs(restricted_probe_integral(p, x, (hi, top)))
            assert cert >= val
            checked += 1
        if mid < min(hi, top):  # stationary region: second derivative
            cert = vdc_certificate(p, x, (mid, min(hi, top)), 2)
            val = abs(restricted_probe_integral(p, x, (mid, min(hi, top))))
            assert cert >= val
            checked += 1


# -- phase derivative formulas ------------------------------------------------

def test_phase_derivatives_match_central_differences():
    rng = np.random.default_rng(9)
    for _ in range(50):
        a = rng.uniform(1.2, 3.5)
        t = rng.uniform(-0.9, 0.9)
        x = rng.uniform(-5.0, 5.0)
        xi = rng.uniform(0.5, 8.0)
        h = 1e-5 * xi
        d1_num = (phase_value(a, t, x, xi + h) - phase_value(a, t, x, xi - h)) / (2 * h)
        d2_num = (phase_d1(a, t, x, xi + h) - phase_d1(a, t, x, xi - h)) / (2 * h)
        d3_num = (phase_d2(a, t, xi + h) - phase_d2(a, t, xi - h)) / (2 * h)
        scale = max(1.0, abs(x), abs(t) * a * xi ** (a - 1))
        assert abs(phase_d1(a, t, x, xi) - d1_num) <= 1e-6 * scale
        if abs(t) > 1e-3:
            assert abs(phase_d2(a, t, xi) - d2_num) <= 1e-6 * max(abs(d2_num), 1.0)
            assert abs(phase_d3(a, t, xi) - d3_num) <= 1e-5 * max(abs(d3_num), 1.0)


# -- h_eps derivative bounds ---------------------------------------------------

def test_extremal_constants_of_y_exp_decay():
    ys = np.linspace(1e-6, 60, 2_000_001)
    assert np.max(ys * np.exp(-ys)) == pytest.approx(math.exp(-1), rel=1e-9)
    assert np.max(ys**2 * np.exp(-ys)) == pytest.approx(4 * math.exp(-2), rel=1e-9)


def test_h_eps_equality_case():
    (d1, b1), (d2, b2) = h_eps_derivative_bounds(2.0, 1.0, 1.0)
    assert d1 == pytest.approx(2 * math.exp(-1), rel=1e-15)
    assert b1 >= d1
    assert b1 == pytest.approx(d1, rel=1e-12)  # the bound is attained here
    assert b2 >= d2


def test_h_eps_randomized_sweep():
    rng = np.random.default_rng(17)
    for _ in range(300):
        a = float(rng.uniform(1.01, 6.0))
        eps = float(10.0 ** rng.uniform(-6, 3))
        xi = float(rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-3, 3))
        h_eps_derivative_bounds(a, eps, xi)  # raises on violation
    with pytest.raises(ValueError):
        h_eps_derivative_bounds(2.0, 1.0, 0.0)


# -- predicted decay exponent --------------------------------------------------

def test_j2_exponent_values():
    assert j2_decay_exponent(2.0, 4.0, 0.75) == pytest.approx(1.0)
    assert j2_decay_exponent(2.0, 4.0, 0.9) == pytest.approx(1.3)
    assert j2_decay_exponent(2.0, 4.0, 0.5) < 1.0
    assert math.isinf(j2_decay_exponent(2.0, 2.0, 0.55))


def test_j2_exponent_crosses_one_at_critical_alpha():
    for a, gamma in [(2.0, 3.0), (3.0, 2.0), (1.5, 4.0)]:
        crit = 0.5 * a * (1 - 1 / gamma)
        assert j2_decay_exponent(a, gamma, crit) == pytest.approx(1.0, abs=1e-12)
        assert j2_decay_exponent(a, gamma, crit + 0.1) > 1.0
        assert j2_decay_exponent(a, gamma, crit - 0.1) < 1.0


# -- envelope ------------------------------------------------------------------

def test_envelope_monotone_in_sample_set():
    xs = np.geomspace(0.01, 10.0, 25)
    small = [(0.3, 0.3, 8.0), (0.5, 0.1, 8.0)]
    large = small + [(0.7, 0.2, 16.0), (0.05, 0.05, 16.0)]
    e_small = probe_envelope(2.0, 2.0, 0.55, small, xs)
    e_large = probe_envelope(2.0, 2.0, 0.55, large, xs)
    assert np.all(e_large >= e_small)


def test_default_corpus_is_deterministic():
    c1 = default_probe_corpus(seed=7)
    c2 = default_probe_corpus(seed=7)
    assert c1 == c2
    assert default_probe_corpus(seed=8) != c1


def test_envelope_report_smoke():
    # trimmed corpus and range: wing values only sanity-checked here;
    # the acceptance suite runs the full configuration
    corpus = default_probe_corpus(pair_count=4, diag_count=4,
                                  n_ladder=(4.0, 32.0), n_diag=(256.0,))
    rep = envelope_l1_estimate(2.0, 2.0, 0.55, x_min=1e-2, x_max=30.0,
                               x_count=31, samples=corpus, certify=False)
    assert rep.envelope.shape == rep.xs.shape
    assert rep.small_slope < 0 and rep.large_slope < -1
    assert rep.l1_mass > 0
    assert math.isinf(rep.predicted_k)
    rows = rep.csv_rows()
    assert rows[0] == "x,E,predicted_bound"
    bound = rep.predicted_bound()
    assert np.all(bound >= rep.envelope * (1 - 1e-12))
    summary = rep.summary()
    assert summary["gamma_at_critical_ratio"] is True
    assert summary["hypothesis"]["satisfied"] is True

import numpy as np
import pytest

from ctdisp.exponents import critical_exponent, gamma_critical, local_critical_exponent


def test_known_values():
    assert critical_exponent(2.0, 2.0) == 0.25
    assert critical_exponent(2.0, 0.5) == 0.0
    assert critical_exponent(2.0, 1.0) == 0.0
    assert critical_exponent(2.0, 4.0) == pytest.approx(0.375)
    # matches the interval endpoint 1/2 - 1/(2 gamma) at gamma = 4
    assert critical_exponent(2.0, 4.0) == pytest.approx(0.5 - 1.0 / 8.0)


def test_local_values():
    assert local_critical_exponent(2.0, 4.0) == 0.25
    assert local_critical_exponent(2.0, 2.0) == 0.25
    assert local_critical_exponent(3.0, 1.2) == pytest.approx(0.125)
    assert local_critical_exponent(3.0, 1.5) == pytest.approx(0.25)


def test_real_time_limit():
    # gamma -> infinity recovers the undamped exponent a/4
    assert critical_exponent(2.0, 1e6) == pytest.approx(0.5, abs=1e-6)
    assert critical_exponent(3.0, 1e9) == pytest.approx(0.75, abs=1e-8)


def test_min_consistency_on_lattice():
    for a in np.linspace(1.05, 5.0, 20):
        for g in np.linspace(0.1, 8.0, 20):
            assert local_critical_exponent(a, g) == min(critical_exponent(a, g), 0.25)


def test_gamma_critical():
    assert gamma_critical(2.0) == 2.0
    assert gamma_critical(3.0) == 1.5
    # the two indices meet exactly at gamma = a/(a-1)
    for a in (1.5, 2.0, 4.0):
        g = gamma_critical(a)
        assert critical_exponent(a, g) == pytest.approx(0.25)


def test_domain_errors():
    with pytest.raises(ValueError):
        critical_exponent(1.0, 2.0)
    with pytest.raises(ValueError):
        critical_exponent(2.0, 0.0)
    with pytest.raises(ValueError):
        gamma_critical(1.0)

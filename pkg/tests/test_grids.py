import numpy as np
import pytest

from ctdisp.grids import (
    EvolutionParams,
    FrequencyGrid,
    FrequencyProfile,
    GridError,
    SpatialField,
    SpatialGrid,
    TimeLadder,
    field_from_csv,
    field_from_json,
    field_to_csv,
    field_to_json,
    profile_from_csv,
    profile_from_json,
    profile_to_csv,
    profile_to_json,
)


def test_frequency_grid_invariants():
    g = FrequencyGrid(-2.0, 2.0, 5)
    assert g.spacing == pytest.approx(1.0)
    assert g.is_symmetric
    assert np.allclose(g.nodes(), [-2, -1, 0, 1, 2])
    with pytest.raises(GridError):
        FrequencyGrid(1.0, -1.0, 5)
    with pytest.raises(GridError):
        FrequencyGrid(0.0, 1.0, 1)


def test_symmetric_grid_has_zero_node():
    g = FrequencyGrid.symmetric(3.0, 10)  # even count is bumped to odd
    assert g.count % 2 == 1
    assert 0.0 in g.nodes()


def test_grid_double_halve_roundtrip():
    g = FrequencyGrid(-1.0, 3.0, 9)
    assert g.doubled().count == 17
    assert g.doubled().halved() == g
    with pytest.raises(GridError):
        FrequencyGrid(-1.0, 3.0, 8).halved()


def test_profile_rejects_nonfinite():
    g = FrequencyGrid(-1.0, 1.0, 3)
    with pytest.raises(GridError):
        FrequencyProfile(g, np.array([1.0, np.nan, 0.0]))
    with pytest.raises(GridError):
        FrequencyProfile(g, np.array([1.0, np.inf, 0.0]))
    with pytest.raises(GridError):
        FrequencyProfile(g, np.ones(4))


def test_profile_refine_coarsen():
    g = FrequencyGrid(-2.0, 2.0, 5)
    p = FrequencyProfile.from_function(lambda xi: np.exp(-xi**2), g)
    fine = p.refined()
    assert fine.grid.count == 9
    assert np.allclose(fine.coarsened().values, p.values)
    sample_only = FrequencyProfile(g, p.values)
    with pytest.raises(GridError):
        sample_only.refined()
    # coarsening needs no source
    assert sample_only.coarsened().grid.count == 3


def test_profile_scaling_keeps_source():
    g = FrequencyGrid(-2.0, 2.0, 5)
    p = FrequencyProfile.from_function(lambda xi: np.exp(-xi**2), g)
    q = p.scaled(2.0)
    assert np.allclose(q.values, 2.0 * p.values)
    assert np.allclose(q.refined().values, 2.0 * p.refined().values)


def test_evolution_params_validation_and_sigma():
    p = EvolutionParams(a=2.0, gamma=3.0, sigma_mode="power")
    assert p.sigma_at(0.5) == pytest.approx(0.125)
    assert EvolutionParams(a=2.0, sigma_mode="none").sigma_at(0.7) == 0.0
    q = EvolutionParams(a=1.5, sigma_mode="explicit", sigma_value=0.2)
    assert q.sigma_at(0.9) == 0.2
    with pytest.raises(GridError):
        EvolutionParams(a=1.0)
    with pytest.raises(GridError):
        EvolutionParams(a=2.0, gamma=0.0)
    with pytest.raises(GridError):
        EvolutionParams(a=2.0, sigma_mode="bogus")


def test_time_ladder_nodes_and_refinement_superset():
    lad = TimeLadder(1e-3, 0.9, 33, "geometric")
    t = lad.times()
    assert t[0] == 1e-3 and t[-1] == 0.9
    assert np.all(np.diff(t) > 0)
    fine = lad.refined()
    assert fine.count == 65
    # refinement inserts midpoints: the original nodes survive bitwise
    assert np.array_equal(fine.times()[::2], t)
    lin = TimeLadder(0.1, 0.5, 5, "linear")
    assert np.allclose(lin.times(), [0.1, 0.2, 0.3, 0.4, 0.5])
    assert np.array_equal(lin.refined().times()[::2], lin.times())
    with pytest.raises(GridError):
        TimeLadder(0.0, 0.5, 4)
    with pytest.raises(GridError):
        TimeLadder(0.5, 1.0, 4)


def test_profile_csv_json_roundtrip():
    g = FrequencyGrid(-1.0, 1.0, 5)
    p = FrequencyProfile(g, np.array([1, 2j, 3, -1j, 0.5]))
    q = profile_from_csv(profile_to_csv(p))
    assert q.grid == g
    assert np.allclose(q.values, p.values)
    r = profile_from_json(profile_to_json(p))
    assert r.grid == g
    assert np.allclose(r.values, p.values)


def test_field_csv_json_roundtrip():
    g = SpatialGrid(0.0, 2.0, 3)
    f = SpatialField(g, np.array([1 + 1j, 0, -2]))
    assert np.allclose(field_from_csv(field_to_csv(f)).values, f.values)
    assert np.allclose(field_from_json(field_to_json(f)).values, f.values)
    with pytest.raises(GridError):
        field_from_csv("bad,header\n1,2,3\n")

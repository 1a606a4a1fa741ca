import math

import numpy as np
import pytest

from degcoh import reference
from degcoh.dynamics import (
    EvolutionGrid,
    distribution_from_amplitudes,
    evolve,
    gk_amplitudes,
    gk_entropic_sum_sweep,
    gk_phase_distribution,
    gk_phase_entropy,
    gk_phase_variance,
)
from degcoh.entropic import LN_2PI, entropy_report, phase_entropy
from degcoh.phase import PhaseGrid, phase_distribution, phase_variance_series, phase_variance_quadrature
from degcoh.spectrum import load_custom
from degcoh.state import TruncationPolicy, make_state

GRID = PhaseGrid()
TWO_PI = 2 * math.pi


def test_evolution_grid():
    assert list(EvolutionGrid(0, 1, 3).gammas) == [0, 0.5, 1]
    with pytest.raises(ValueError):
        EvolutionGrid(1, 1, 3)
    with pytest.raises(ValueError):
        EvolutionGrid(0, 1, 1)


@pytest.mark.parametrize("z", [0.5, 2.0, 5.0])
def test_reduction_at_gamma_zero(system, z):
    state = make_state(system, z)
    static = phase_distribution(state, GRID).values
    np.testing.assert_allclose(gk_phase_distribution(state, GRID, 0.0).values, static, rtol=0, atol=1e-12)
    assert abs(gk_phase_variance(state, 0.0) - phase_variance_series(state)) < 1e-12
    assert abs(gk_phase_entropy(state, GRID, 0.0) - phase_entropy(phase_distribution(state, GRID))) < 1e-12


@pytest.mark.parametrize("name", ["box2d", "ho2d", "ho3d"])
@pytest.mark.parametrize("gamma", [0.3, 1.0, 2.5])
def test_periodic_in_gamma(request, name, gamma):
    state = make_state(request.getfixturevalue(name), 2.0)
    a = gk_phase_distribution(state, GRID, gamma).values
    b = gk_phase_distribution(state, GRID, gamma + TWO_PI).values
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_not_periodic_for_irrational_spectrum():
    spec = load_custom("\n".join(f"{n * math.sqrt(2)} 1" for n in range(60)))
    state = make_state(spec, 1.5)
    a = gk_phase_distribution(state, GRID, 0.4).values
    b = gk_phase_distribution(state, GRID, 0.4 + TWO_PI).values
    assert np.max(np.abs(a - b)) > 1e-3


def test_two_step_evolution_matches_single_step(box2d):
    state = make_state(box2d, 2.5)
    g1, g2 = 0.7, 1.9
    stepped = evolve(evolve(gk_amplitudes(state, 0.0), state, g1), state, g2)
    np.testing.assert_allclose(stepped, gk_amplitudes(state, g1 + g2), atol=1e-13)
    np.testing.assert_allclose(distribution_from_amplitudes(stepped, GRID).values,
                               gk_phase_distribution(state, GRID, g1 + g2).values, atol=1e-12)


@pytest.mark.parametrize("name", ["box2d", "ho3d"])
@pytest.mark.parametrize("z", [1.0, 2.0, 5.0])
@pytest.mark.parametrize("gamma", [0.3, 1.0, 2.5])
def test_variance_series_vs_quadrature(request, name, z, gamma):
    state = make_state(request.getfixturevalue(name), z)
    dist = gk_phase_distribution(state, GRID, gamma)
    assert abs(gk_phase_variance(state, gamma) - phase_variance_quadrature(dist)) < 1e-8
    assert abs(dist.integrate() - 1) < 1e-8


def test_density_matches_pairwise_reference(box2d):
    state = make_state(box2d, 2.0)
    grid = PhaseGrid(points=64)
    dist = gk_phase_distribution(state, grid, 1.3)
    for j in (0, 5, 17, 32, 50):
        ref = reference.gk_density(box2d, 2.0, 40, dist.theta[j], 1.3)
        assert dist.values[j] == pytest.approx(float(ref), abs=1e-13)


def test_nonnegative_density(ho3d):
    state = make_state(ho3d, 3.0)
    for gamma in np.linspace(0, TWO_PI, 17):
        assert gk_phase_distribution(state, GRID, gamma).values.min() >= 0


def test_vacuum_is_stationary(system):
    state = make_state(system, 0.0)
    for gamma in (0.0, 0.8, 3.3):
        assert gk_phase_variance(state, gamma) == pytest.approx(math.pi**2 / 3, rel=1e-15)
        assert gk_phase_entropy(state, GRID, gamma) == pytest.approx(LN_2PI, abs=1e-12)
    rows = gk_entropic_sum_sweep(state, GRID, EvolutionGrid(0, TWO_PI, 9))
    assert all(abs(r.total - LN_2PI) < 1e-12 for r in rows)


def test_phase_entropy_oscillates(box2d):
    state = make_state(box2d, 5.0)
    vals = [gk_phase_entropy(state, GRID, g) for g in np.linspace(0, TWO_PI, 65)]
    assert np.ptp(vals) > 0.01


def test_sweep_rows(box2d):
    state = make_state(box2d, 2.0)
    rows = gk_entropic_sum_sweep(state, GRID, EvolutionGrid(0, TWO_PI, 33))
    r_n = entropy_report(state).r_number
    assert len(rows) == 33
    assert all(r.r_number == r_n for r in rows)
    assert all(r.total >= LN_2PI - 1e-9 for r in rows)
    assert rows[0].total == pytest.approx(entropy_report(state).total, abs=1e-12)


def test_box2d_z2_oscillation_against_reference(box2d):
    """The amplitude threshold is confirmed with the multiprecision pairwise sum."""
    state = make_state(box2d, 2.0)
    rows = gk_entropic_sum_sweep(state, GRID, EvolutionGrid(0, TWO_PI, 129))
    totals = np.array([r.total for r in rows])
    assert np.ptp(totals) > 0.01
    hi, lo = rows[int(np.argmax(totals))], rows[int(np.argmin(totals))]
    for row in (hi, lo):
        ref = reference.gk_phase_entropy(box2d, 2.0, 40, row.gamma, points=128)
        assert row.r_phase == pytest.approx(float(ref), abs=1e-10)


def test_complex_z_rejected(ho3d):
    state = make_state(ho3d, 1 + 1j)
    with pytest.raises(ValueError):
        gk_phase_variance(state, 0.5)
    with pytest.raises(ValueError):
        gk_phase_distribution(state, GRID, 0.5)


def test_table_box_sweep_bound(box2d_23):
    policy = TruncationPolicy(finite_system=True)
    for z in (2.0, 5.0, 20.0):
        rows = gk_entropic_sum_sweep(make_state(box2d_23, z, policy), GRID, EvolutionGrid(0, TWO_PI, 65))
        assert min(r.total for r in rows) >= LN_2PI - 1e-9

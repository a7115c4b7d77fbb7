from kamodo_phasespace.models import states
from kamodo_phasespace.errors import DomainError, NumericalError
import numpy as np
import pytest
from scipy import integrate

seed = 0
tol = 1e-10


def test_state_validation():
    assert states.GaussianState(1.0).is_delta
    with pytest.raises(DomainError):
        states.GaussianState(0.0, 1.0)
    with pytest.raises(DomainError):
        states.GaussianState(1.0, -0.1)
    with pytest.raises(DomainError):
        states.GaussianState(1.0).momentum_marginal(0.5)


def test_marginals_are_normalized():
    state = states.GaussianState(1.3, 0.7)
    r = np.linspace(0.0, 15.0, 30001)
    for density in (state.position_marginal(r),
                    state.momentum_marginal(r)):
        assert integrate.simpson(4*np.pi*r*r*density, x=r) == \
            pytest.approx(1.0, abs=1e-8)


def test_samples_follow_widths():
    points = states.GaussianState(2.0, 0.5).sample(
        np.random.default_rng(seed), 200000)
    assert points.shape == (200000, 6)
    assert np.allclose(points[:, :3].std(axis=0), 2.0, rtol=1e-2)
    assert np.allclose(points[:, 3:].std(axis=0), 0.5, rtol=1e-2)


@pytest.mark.parametrize('sigma_q,sigma_p', [(1.0, 1.0), (0.6, 2.0),
                                             (1.5, 0.0)])
def test_normalization(sigma_q, sigma_p):
    value, error = states.expect(states.observable_one(),
                                 states.GaussianState(sigma_q, sigma_p))
    assert value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize('sigma_q,sigma_p', [(1.2, 0.7), (2.0, 0.3)])
def test_mean_energy(sigma_q, sigma_p):
    exact = 1.5*sigma_p**2 - np.sqrt(2/np.pi)/sigma_q
    value, _ = states.expect(states.observable_hamiltonian(),
                             states.GaussianState(sigma_q, sigma_p))
    assert value == pytest.approx(exact, abs=1e-8)


def test_ground_width():
    sigma = states.find_sigma_gnd(tol)
    assert sigma == pytest.approx(1.59577048804, abs=1e-6)
    assert abs(states.ground_overlap(sigma)) <= 1e-8


def test_ground_summary():
    state = states.ground_state()
    ratio = states.mean_energy(state)/-0.5
    assert 0.0 < 1.0 - ratio <= 1e-5
    assert states.most_probable_radius(state) == pytest.approx(2.257,
                                                               abs=1e-3)
    with pytest.raises(DomainError):
        states.most_probable_radius(states.GaussianState(1.0, 1.0))


def test_bracket_without_sign_change():
    with pytest.raises(NumericalError):
        states.find_sigma_gnd(tol, bracket=(2.0, 2.5))


def test_energy_distribution_of_ground_state():
    probs, errors, first = states.energy_distribution(states.ground_state(),
                                                      n_max=30)
    assert sum(probs.values()) == pytest.approx(1.0, abs=1e-4)
    assert probs[2] == pytest.approx(0.0, abs=1e-8)
    assert first == pytest.approx(states.mean_energy(states.ground_state()),
                                  abs=1e-3)


@pytest.mark.parametrize('sigma_q,sigma_p,sign', [(0.5, 0.5, -1),
                                                  (2.0, 0.5, 1)])
def test_positivity_signs(sigma_q, sigma_p, sign):
    state = states.GaussianState(sigma_q, sigma_p)
    value, error = states.expect(states.observable_g_h(2), state, tol=tol)
    if sign < 0:
        assert value < -error
    else:
        assert value > -error
    mc, stderr = states.expect_mc(states.observable_g_h(2), state, 10**6,
                                  seed)
    assert abs(mc - value) <= 4*stderr + error


def test_scan_cells():
    cells = states.positivity_scan([0.5, 2.0], [0.5], n=2, threads=2)
    assert [(c.sigma_q, c.sigma_p) for c in cells] == [(0.5, 0.5),
                                                       (2.0, 0.5)]
    assert cells[0].sign == '-'
    assert cells[1].sign in '+0'
    with pytest.raises(DomainError):
        states.positivity_scan([0.0], [0.5])

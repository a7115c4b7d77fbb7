from kamodo_phasespace.models import spectral
from kamodo_phasespace.errors import DomainError
import numpy as np
import pytest

seed = 0
circular = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])  # H = E_1, L3 = 1


def test_levels():
    assert spectral.energy_level(1) == -0.5
    assert spectral.energy_level(2) == -0.125
    assert np.allclose(spectral.energy_level([3, 4]), [-1/18, -1/32])
    ladder = spectral.EnergyLadder(kappa=2.0)
    assert ladder.level(1) == -1.0
    assert ladder.locate(-0.6) == (1, 2)


@pytest.mark.parametrize('x,expected', [(-0.3, (1, 2)), (-0.5, (1, 2)),
                                        (-0.125, (2, 3)), (-0.6, (0, 1)),
                                        (-0.01, (7, 8)), (-1e-6, (707, 708))])
def test_locate_interval(x, expected):
    assert spectral.locate_interval(x) == expected


def test_locate_interval_tail_and_continuum():
    assert spectral.locate_interval(-3.0) == spectral.TAIL
    with pytest.raises(DomainError):
        spectral.locate_interval(0.0)


@pytest.mark.parametrize('n,x,expected', [(1, -0.5, 1.0), (2, -0.5, 0.0),
                                          (2, -0.125, 1.0),
                                          (1, -0.75, 5/3), (2, -0.75, -2/3),
                                          (3, -0.125, 0.0), (3, -1/18, 1.0),
                                          (4, -0.5, 0.0)])
def test_t_h_values(n, x, expected):
    assert spectral.t_h(n, x) == pytest.approx(expected, abs=1e-15)


def test_t_h_domain():
    with pytest.raises(DomainError):
        spectral.t_h(0, -0.3)
    with pytest.raises(DomainError):
        spectral.t_h(2, np.array([-0.3, 0.1]))
    assert spectral.t_h(2, 0.1, strict=False) == 0.0


def test_energy_partition():
    x = np.random.default_rng(seed).uniform(-1.0, -1e-6, 10**5)
    total, moment, spill = spectral.partition_residuals(x)
    assert total <= 1e-12
    assert moment <= 1e-12
    assert spill == 0.0


def test_energy_decomposition_matches_members():
    x = np.array([-0.8, -0.5, -0.3, -0.1, -0.03])
    n_lo, n_hi, t_lo, t_hi = spectral.energy_decomposition(x)
    assert np.array_equal(n_lo, [1, 1, 1, 2, 4])
    for i in range(x.size):
        assert t_lo[i] == pytest.approx(spectral.t_h(int(n_lo[i]), x[i]))
        assert t_hi[i] == pytest.approx(spectral.t_h(int(n_hi[i]), x[i]))


def test_angular_family():
    assert spectral.t_l(0, 0.5) == 0.5
    assert spectral.t_l(1, 0.5) == 0.5
    assert spectral.t_l(2, 0.5) == 0.0
    assert spectral.t_l(-1, -1.2, hbar=1.0) == pytest.approx(0.8)
    y = np.random.default_rng(seed).uniform(-10.0, 10.0, 10**5)
    total, moment = spectral.angular_partition_residuals(y)
    assert total <= 1e-14
    assert moment <= 1e-12
    family = spectral.angular_family(np.array([0.25]), (-3, 3))
    assert sorted(family) == list(range(-3, 4))


def test_phase_space_measures():
    assert spectral.hamiltonian(circular) == -0.5
    assert spectral.g_h(1, circular) == 1.0
    assert spectral.g_h(2, circular) == 0.0
    value, level = spectral.g_hb(1, 1, circular, B=0.2)
    assert value == 1.0
    assert level == pytest.approx(-0.5 + 0.5*0.2)
    with pytest.raises(DomainError):
        spectral.hamiltonian(np.zeros(6))


def test_point_state_validity():
    assert spectral.is_valid_point_state(circular)
    assert not spectral.is_valid_point_state([1.0, 0, 0, 0, 0, 0])
    assert spectral.is_valid_point_state([2.0, 0, 0, 0, 0.5, 0])
    assert not spectral.is_valid_point_state([1.0, 0, 0, 2.0, 0, 0])


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_zeeman_support(n):
    result = spectral.zeeman_support(n, 20000, seed)
    assert result.stated_bound == 2*(n+1)
    assert result.observed_max == n+1
    assert result.search_max == n+1


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_support_scan_gives_the_observed_maximum(n):
    bound = spectral.angular_bound(n)
    assert bound == pytest.approx(n+1)
    assert spectral.support_scan(bound, 2*(n+1)+1) == n+1
    assert spectral.support_scan(bound + 0.5, 2*(n+1)+1) == n+2
    assert spectral.support_scan(0.4, 5) == 1


def test_poisson_stationarity():
    points = np.array([[1.5, 0.3, -0.2, 0.1, 0.6, 0.2],
                       [4.0, 1.0, 0.0, 0.0, 0.1, 0.3]])
    assert spectral.poisson_stationarity_residual(2, points) <= 1e-6

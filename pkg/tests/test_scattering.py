from kamodo_phasespace.models import scattering
from kamodo_phasespace.algebra.phase_expr import PhaseExpr
from kamodo_phasespace.errors import DomainError
import numpy as np
import pytest

angles = [30.0, 60.0, 90.0, 120.0]


def test_rutherford_formulas():
    assert scattering.rutherford_impact(np.pi/2) == pytest.approx(1.0)
    assert scattering.rutherford(np.pi) == pytest.approx(0.25)
    assert scattering.rutherford(np.pi/2, p0=2.0) == pytest.approx(
        (1/8)**2/np.sin(np.pi/4)**4)


@pytest.mark.parametrize('degrees', angles)
def test_trajectory_matches_rutherford(degrees):
    theta = np.deg2rad(degrees)
    b = float(scattering.rutherford_impact(theta))
    info = scattering.trajectory_angle(b, return_info=True)
    assert info.theta == pytest.approx(theta, abs=1e-6)
    assert info.energy_drift <= 1e-8
    assert info.r_min > 0.0


def test_repulsive_trajectory():
    theta = np.deg2rad(60.0)
    b = float(scattering.rutherford_impact(theta))
    assert scattering.trajectory_angle(b, repulsive=True) == pytest.approx(
        theta, abs=1e-6)


def test_trajectory_validation():
    with pytest.raises(DomainError):
        scattering.trajectory_angle(0.0)
    with pytest.raises(DomainError):
        scattering.ScatterConfig(bin_edges=(10, 5))
    with pytest.raises(DomainError):
        scattering.ScatterConfig(bin_edges=(0, 90))
    with pytest.raises(DomainError):
        scattering.ScatterConfig(n_particles=0)


def test_angle_follows_the_integration():
    b = 1.0
    exact = np.pi/2
    assert scattering.trajectory_angle(b) == pytest.approx(exact, abs=1e-6)
    assert abs(scattering.trajectory_angle(b, rtol=1e-3) - exact) > 1e-7


def test_incoming_asymptote_is_the_beam_axis():
    b, R = 0.7, 200.0
    P = np.sqrt(1.0 + 2/R)
    y0 = b/P
    start = np.array([-np.sqrt(R*R - y0*y0), y0, P, 0.0])
    assert scattering._asymptote(start, 0.5, -b, 1.0, 1.0, False) == \
        pytest.approx(0.0, abs=1e-12)


def exact_table(config, size=400):
    b = np.geomspace(0.1, config.b_max, size)
    return b, 2*np.arctan(config.length_scale/b)


def test_stratified_beam_counts():
    config = scattering.ScatterConfig(n_particles=10**5, n_check=0)
    result = scattering.cross_section(config, table=exact_table(config))
    edges = np.deg2rad(np.asarray(config.bin_edges, dtype=float))
    b = scattering.rutherford_impact(edges)
    expected = config.n_particles*(b[:-1]**2 - b[1:]**2)/config.b_max**2
    counts = np.array([row.count for row in result.bins])
    assert np.all(np.abs(counts - expected) <= 3)
    assert result.interp_error == 0.0


def test_sampled_particles_match_the_table():
    config = scattering.ScatterConfig(n_particles=1000, n_check=5)
    result = scattering.cross_section(config, threads=2,
                                      table=exact_table(config))
    assert 0.0 < result.interp_error <= 1e-4
    with pytest.raises(DomainError):
        scattering.ScatterConfig(n_check=-1)


def test_default_beam_covers_the_bins():
    config = scattering.ScatterConfig()
    assert (config.bin_edges[0], config.bin_edges[-1]) == (30, 150)
    assert config.stratified
    theta_edge = 2*np.arctan(config.length_scale/config.b_max)
    assert np.rad2deg(theta_edge) < config.bin_edges[0]


def test_beam_density():
    config = scattering.ScatterConfig(b_max=2.0, n_particles=400)
    assert config.density == pytest.approx(100/np.pi)
    assert config.length_scale == 1.0


@pytest.mark.slow
def test_cross_section():
    config = scattering.ScatterConfig(n_particles=2*10**5, n_check=20)
    result = scattering.cross_section(config, threads=2)
    assert result.interp_error <= 1e-4
    assert len(result.bins) == len(config.bin_edges) - 1
    assert result.dof == len(result.bins)
    assert result.chi2 <= 2*result.dof
    for row in result.bins:
        assert row.count > 0
        assert abs(row.ratio - 1.0) <= 5*row.stderr/row.rutherford_formula


def test_first_bin_must_clear_beam_edge():
    config = scattering.ScatterConfig(b_max=0.5, n_particles=10, n_table=20)
    with pytest.raises(DomainError):
        scattering.cross_section(config, threads=1)


def test_exponent_table():
    ledger = scattering.exponent_table(20)
    assert ledger.survivors_raw() == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert ledger.survivors() == [(0, 0), (0, 1), (0, 2)]
    assert ledger.alpha[(1, 1)] == 3
    assert ledger.verdict() == 'Rutherford, classical'
    assert scattering.classical_verdict() == scattering.far_field_verdict
    assert scattering.classical_verdict(10) == scattering.far_field_verdict
    with pytest.raises(DomainError):
        scattering.exponent_table(1)


def test_kernel_homogeneity():
    assert scattering.radial_degree(PhaseExpr.radial(-1)) == {-1}
    degrees = scattering.kernel_homogeneity_check(3)
    assert len(degrees) == 10
    assert set(degrees.values()) == {-4}
    with pytest.raises(DomainError):
        scattering.kernel_homogeneity_check(0)

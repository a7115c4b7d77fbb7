from kamodo_phasespace.models import dynamics
from kamodo_phasespace.errors import DomainError, InstabilityError
import numpy as np
import pytest

# small grid settings
n = 128
n_p = 512
half_width = 8.0
p_half_width = 40.0
bounds = (-half_width, half_width, -half_width, half_width)
wide = (-half_width, half_width, -16.0, 16.0)


def small_run(a1=0.0, **kwargs):
    return dynamics.anharmonic_run(a1=a1, n=n, n_p=n_p, half_width=half_width,
                                   p_half_width=p_half_width, **kwargs)


def test_wedge_schedule():
    assert np.allclose(dynamics.wedge(np.array([0.0, 0.25, 0.5, 1.0, 1.5])),
                       [0.0, 0.5, 1.0, 0.0, 0.0])
    spec = dynamics.EvolutionSpec()
    assert spec.lam(np.pi/8) == pytest.approx(1/3)
    assert spec.lam(np.pi/4) == pytest.approx(0.0, abs=1e-15)
    assert dynamics.EvolutionSpec(schedule='constant').lam(0.0) == 1/3
    with pytest.raises(DomainError):
        dynamics.EvolutionSpec(schedule='ramp')


def test_stencils_exact_on_cubics():
    grid = dynamics.PhaseGrid.uniform(bounds, 40, 40,
                                      lambda Q, P: Q**3 + P**3)
    Q, P = grid.mesh()
    first = dynamics.d1(grid.values, grid.dq, 0)
    third = dynamics.d3(grid.values, grid.dp, 1)
    assert np.allclose(first[2:-2], 3*Q[2:-2]**2, atol=1e-9)
    assert np.allclose(third[:, 2:-2], 6.0, atol=1e-7)


def test_mesh_is_built_once():
    grid = dynamics.PhaseGrid.uniform(wide, 16, 24)
    Q, P = grid.mesh()
    assert Q.shape == P.shape == (16, 24)
    assert grid.mesh()[0] is Q
    assert grid.copy().mesh()[1] is P


def test_grid_validation():
    with pytest.raises(DomainError):
        dynamics.PhaseGrid(np.arange(3.0), np.arange(4.0), np.zeros((4, 3)))
    small = dynamics.PhaseGrid.uniform(bounds, 5, 5)
    with pytest.raises(DomainError):
        dynamics.rhs(small, dynamics.EvolutionSpec(), 0.0)


def test_harmonic_ground_state_is_stationary():
    run = small_run(a1=-1/24, schedule='constant', lam_peak=0.0)
    start = dynamics.PhaseGrid.uniform((-half_width, half_width,
                                        -p_half_width, p_half_width), n, n_p,
                                       dynamics.oscillator_ground_state())
    assert np.max(np.abs(run.grid.values - start.values)) <= 1e-3
    assert run.moments['mean_p2'][-1] == pytest.approx(0.5, abs=1e-4)


def test_conservation_and_ehrenfest():
    run = small_run(a1=-1/24, q0=0.5)
    mass = run.moments['mass']
    assert np.max(np.abs(mass - mass[0])) <= 1e-6
    res_q, res_p = dynamics.ehrenfest_residual(run.moments)
    assert res_q <= 1e-3
    assert res_p <= 1e-3
    assert run.grid.time == pytest.approx(np.pi/4)
    assert run.boundary_ratio <= 1e-10


@pytest.mark.parametrize('a1', [0.0, -1/48])
def test_energy_conserved_at_constant_coupling(a1):
    run = small_run(a1=a1, schedule='constant', lam_peak=0.2)
    energy = run.moments['mean_H']
    assert energy[0] > 0.5
    assert np.max(np.abs(energy - energy[0])) <= 1e-3*energy[0]


def test_evolution_is_linear():
    spec = dynamics.EvolutionSpec(a1=-1/24, schedule='constant',
                                  lam_peak=0.1, t_end=0.2)
    one = dynamics.PhaseGrid.uniform(wide, 64, 96,
                                     dynamics.oscillator_ground_state())
    two = dynamics.PhaseGrid.uniform(wide, 64, 96,
                                     dynamics.oscillator_ground_state(1.0,
                                                                      -0.5))
    alpha, beta = 0.3, -1.7
    mixed = one.copy(alpha*one.values + beta*two.values)
    combined = alpha*dynamics.evolve(one, spec).grid.values + \
        beta*dynamics.evolve(two, spec).grid.values
    assert np.max(np.abs(dynamics.evolve(mixed, spec).grid.values -
                         combined)) <= 1e-8


def test_zero_field_stays_zero():
    grid = dynamics.PhaseGrid.uniform(wide, 32, 48)
    run = dynamics.evolve(grid, dynamics.EvolutionSpec(a1=-1/24))
    assert not np.any(run.grid.values)
    assert run.boundary_ratio == 0.0
    assert not np.any(run.moments['mass'])


@pytest.mark.parametrize('hbar', [1.0, 0.5])
def test_correction_term_of_the_generator(hbar):
    grid = dynamics.PhaseGrid.uniform(wide, 48, 64,
                                      dynamics.oscillator_ground_state(0.5))
    spec = dynamics.EvolutionSpec(a1=-1/24, hbar=hbar, schedule='constant',
                                  lam_peak=0.3)
    Q, P = grid.mesh()
    difference = dynamics.rhs(grid, spec, 0.1) - \
        dynamics.rhs(grid, dynamics.with_a1(spec, 0.0), 0.1)
    expected = spec.a1*hbar**2*12*0.3*Q*dynamics.d3(grid.values, grid.dp, 1)
    assert np.allclose(difference, expected, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize('a1', [0.0, -1/24])
def test_wedge_experiment(a1):
    run = small_run(a1)
    assert run.moments['mean_p2'][-1] == pytest.approx(0.6795 + 0.0823*a1,
                                                      abs=0.01)
    assert run.boundary_ratio <= 1e-10


def test_response_is_affine_in_a1():
    values = [small_run(a1).moments['mean_p2'][-1]
              for a1 in (0.0, -1/48, -1/24)]
    assert abs(values[1] - 0.5*(values[0] + values[2])) <= 1e-3
    slope = (values[0] - values[2])*24
    assert slope == pytest.approx(0.0823, rel=0.2)


@pytest.mark.slow
def test_grid_halving():
    fine = dynamics.anharmonic_run(a1=0.0)
    coarse = dynamics.anharmonic_run(a1=0.0, n=256)
    assert abs(fine.moments['mean_p2'][-1] -
               coarse.moments['mean_p2'][-1]) <= 2e-3


def test_unstable_step_is_reported():
    grid = dynamics.PhaseGrid.uniform(wide, 64, 64,
                                      dynamics.oscillator_ground_state())
    dt = 20*dynamics.EvolutionSpec().stable_dt(grid)
    with pytest.raises(InstabilityError):
        dynamics.evolve(grid, dynamics.EvolutionSpec(dt=dt))


def test_boundary_leak_is_reported():
    with pytest.raises(InstabilityError):
        dynamics.anharmonic_run(n=64, half_width=6.0, p_half_width=6.0,
                                q0=5.0)


def test_square_domain_leaks_through_momentum_edges():
    with pytest.raises(InstabilityError, match='Boundary ring') as err:
        dynamics.anharmonic_run(n=96, half_width=8.0, p_half_width=8.0)
    assert err.value.time < np.pi/4


def test_with_a1():
    spec = dynamics.with_a1(dynamics.EvolutionSpec(), -1/24)
    assert spec.a1 == -1/24
    assert spec.lam_peak == 1/3

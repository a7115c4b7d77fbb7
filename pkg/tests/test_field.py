from kamodo_phasespace.models import field
from kamodo_phasespace.models.states import ground_overlap, ground_sigma
from kamodo_phasespace.errors import DomainError
import numpy as np
import pytest

seed = 0
drive = field.DriveSpec()


def test_drive_defaults():
    assert drive.omega == pytest.approx(0.375)
    assert drive.eE == pytest.approx(drive.mu*drive.omega**2)
    assert drive.t_max == pytest.approx(6.0)
    assert drive.max_momentum_shift() == pytest.approx(1.5)
    with pytest.raises(DomainError):
        field.DriveSpec(omega=0.0)


def test_shift():
    assert field.shift(0.0) == (0.0, 0.0)
    t = 2.0
    wt = drive.omega*t
    s, u = drive.shift(t)
    assert s == pytest.approx(2*(np.sin(wt) - wt*np.cos(wt)))
    assert u == pytest.approx(2*drive.eE/drive.omega*(np.cos(wt) - 1.0))
    s, u = drive.shift(drive.times())
    assert s.shape == u.shape == (drive.n_samples,)
    assert np.all(np.abs(u) <= drive.max_momentum_shift() + 1e-12)
    with pytest.raises(DomainError):
        drive.shift(-1.0)


def test_commutator_with_amplitude():
    G = field.commutator_G(eE=0.5)
    assert G == field.PhaseExpr.parse('-sin_wt*p3')


def test_initial_probabilities():
    assert field.prob_level(0.0, 2) == pytest.approx(
        ground_overlap(ground_sigma), abs=1e-9)
    assert abs(field.prob_level(0.0, 2)) <= 1e-8
    assert 0.99 < field.prob_level(0.0, 1) <= 1.0 + 1e-9
    with pytest.raises(DomainError):
        field.prob_level(0.0, 0)


@pytest.mark.parametrize('t', [1.0, 3.0, 6.0])
def test_level_probabilities(t):
    pr1, pr2 = field.prob_level(t, 1), field.prob_level(t, 2)
    assert pr2 > 0.0
    assert pr1 + pr2 <= 1.0 + 1e-9
    mc, stderr = field.prob_level_mc(t, 1, n_samples=10**6, seed=seed)
    assert abs(mc - pr1) <= 4*stderr + 1e-9


def test_quantum_curve_at_start():
    assert field.prob_level_qt(0.0, 1) == pytest.approx(1.0, abs=1e-6)
    assert field.prob_level_qt(0.0, 2) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(DomainError):
        field.prob_level_qt(1.0, 3)


@pytest.mark.parametrize('psi', [field.psi_100, field.psi_200,
                                 field.psi_210])
def test_overlap_oracle(psi):
    s, u = 0.8, -0.4
    exact = abs(field.overlap(psi, s, u))**2
    mc, stderr = field.overlap_mc(psi, s, u, n_samples=10**6, seed=seed)
    assert abs(mc - exact) <= 4*stderr + 1e-9


def test_excitation_curve():
    rows = field.excitation_curve(times=[0.0, 2.0, 4.0], threads=2)
    assert [row.t for row in rows] == [0.0, 2.0, 4.0]
    assert rows[0].pr_qt_E1 == pytest.approx(1.0, abs=1e-6)
    assert rows[2].pr_E2 > rows[0].pr_E2
    assert field.agreement(rows) >= 0.0

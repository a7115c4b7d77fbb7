from kamodo_phasespace.models import model_utilities as MU
from kamodo_phasespace.models import spectral
import numpy as np
import pytest


def test_check_requested(capsys):
    names = MU.check_requested([], spectral.model_varnames)
    assert {'TH', 'TL'} <= set(names)
    assert MU.check_requested(['TL', 'XX'], spectral.model_varnames) == \
        ['TL']
    assert 'XX' in capsys.readouterr().out


def test_create_interp():
    q = np.linspace(-1.0, 1.0, 5)
    p = np.linspace(0.0, 2.0, 3)
    Q, P = np.meshgrid(q, p, indexing='ij')
    interp = MU.create_interp({'q': q, 'p': p}, Q + P)
    assert interp(np.array([[0.25, 0.5]]))[0] == pytest.approx(0.75)
    assert np.isnan(interp(np.array([[3.0, 0.5]]))[0])
    series = MU.create_interp({'t': p}, 2*p)
    assert series(1.5) == pytest.approx(3.0)


def test_spectral_model():
    pytest.importorskip('kamodo')
    model = spectral.MODEL()(n_max=2, m_range=(0, 1))
    assert model['TH_1'](-0.3) == pytest.approx(spectral.t_h(1, -0.3))
    assert model['TL_1'](0.5) == pytest.approx(0.5)


def test_dynamics_model():
    pytest.importorskip('kamodo')
    from kamodo_phasespace.models import dynamics

    result = dynamics.anharmonic_run(n=32, half_width=8.0, p_half_width=8.0,
                                     schedule='constant', lam_peak=0.0,
                                     t_end=0.1)
    model = dynamics.MODEL()(result, variables_requested=['rho'],
                             gridded_int=False)
    assert callable(model['rho'])

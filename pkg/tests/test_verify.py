from kamodo_phasespace.runs import verify
from kamodo_phasespace.models import dynamics
from types import SimpleNamespace
import numpy as np
import pytest


def fake_evolve(calls, seconds=1.0, slope=verify.p2_slope):
    def _evolve(a1, n):
        calls.append((a1, n))
        value = verify.p2_intercept + slope*a1
        run = SimpleNamespace(moments={'mean_p2': np.array([0.5, value]),
                                       'mass': np.ones(3)},
                              boundary_ratio=1e-12)
        return run, seconds
    return _evolve


@pytest.mark.parametrize('mode', ['full', 'quick'])
def test_a1_runs_share_one_grid(monkeypatch, mode):
    calls = []
    monkeypatch.setattr(verify, '_evolve', fake_evolve(calls))
    monkeypatch.setattr(dynamics, 'ehrenfest_residual',
                        lambda moments: (0.0, 0.0))
    rows = verify.check_evolution(verify.sizes[mode])
    n = verify.sizes[mode]['evolve_n']
    assert calls[:3] == [(0.0, n), (-1/48, n), (-1/24, n)]
    assert calls[3] == (0.0, n//2)
    assert all(row.passed for row in rows)
    assert {row.name for row in rows} >= {'mean_p2_slope', 'boundary_ring',
                                          'grid_halving'}


def test_full_suite_uses_the_tight_slope_band(monkeypatch):
    size = verify.sizes['full']
    assert size['evolve_n'] == 512
    assert size['evolve_slope_tol']*verify.p2_slope <= 0.0083 + 1e-12
    monkeypatch.setattr(verify, '_evolve',
                        fake_evolve([], slope=verify.p2_slope + 0.0095))
    monkeypatch.setattr(dynamics, 'ehrenfest_residual',
                        lambda moments: (0.0, 0.0))
    rows = {row.name: row for row in verify.check_evolution(size)}
    assert not rows['mean_p2_slope'].passed


def test_slow_runs_fail_the_time_cap(monkeypatch):
    size = verify.sizes['quick']
    monkeypatch.setattr(verify, '_evolve',
                        fake_evolve([], seconds=size['evolve_seconds'] + 1))
    monkeypatch.setattr(dynamics, 'ehrenfest_residual',
                        lambda moments: (0.0, 0.0))
    rows = verify.check_evolution(size)
    assert not any(row.passed for row in rows
                   if row.name.startswith('mean_p2(a1'))

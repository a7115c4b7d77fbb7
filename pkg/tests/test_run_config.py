from kamodo_phasespace.runs import run_config
from kamodo_phasespace.errors import ConfigError
import pytest


def test_packaged_defaults():
    cfg = run_config.load_config(environ={})
    assert cfg.units == 'internal'
    assert cfg.bracket.preset == 'symbolic'
    assert cfg.evolve.n == 512
    assert cfg.scatter.b_max == 5.0
    assert (cfg.scatter.bin_min, cfg.scatter.bin_max) == (30, 150)
    assert (cfg.evolve.p_half_width, cfg.evolve.n_p) == (40.0, 1024)


def test_layers(tmp_path):
    config_file = tmp_path / 'run.yaml'
    config_file.write_text('threads: 2\nscan:\n  n: 3\n')
    cfg = run_config.load_config(config_file,
                                 overrides=['scan.n=4', 'seed=7'],
                                 flags={'seed': 11, 'threads': None},
                                 environ={})
    assert cfg.threads == 2
    assert cfg.scan.n == 4
    assert cfg.seed == 11


def test_output_directory_from_environment(tmp_path):
    cfg = run_config.load_config(
        environ={run_config.output_env: str(tmp_path)})
    assert cfg.output_dir == str(tmp_path)


@pytest.mark.parametrize('overrides', [['scan.width=3'], ['nothing=1'],
                                       ['units=cgs'], ['threads=0'],
                                       ['threads']])
def test_rejected_overrides(overrides):
    with pytest.raises(ConfigError):
        run_config.load_config(overrides=overrides, environ={})


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        run_config.load_config(tmp_path / 'absent.yaml', environ={})


def test_get():
    cfg = run_config.load_config(environ={})
    assert run_config.get(cfg, 'scan.sigma_q.num') == 16
    with pytest.raises(ConfigError):
        run_config.get(cfg, 'scan.width')


def test_display_units():
    assert run_config.display('energy', -0.5, 'internal') == (-0.5,
                                                               'internal')
    value, label = run_config.display('energy', -0.5, 'display')
    assert label == 'eV'
    assert value == pytest.approx(-13.605693123)
    assert run_config.display('length', 1.0, 'display')[1] == 'angstrom'


def test_threads_default_to_available_cores(monkeypatch):
    monkeypatch.setattr(run_config.os, 'cpu_count', lambda: 6)
    assert run_config.load_config(environ={}).threads == 6
    monkeypatch.setattr(run_config.os, 'cpu_count', lambda: None)
    assert run_config.load_config(environ={}).threads == 1
    cfg = run_config.load_config(overrides=['threads=3'], environ={})
    assert cfg.threads == 3

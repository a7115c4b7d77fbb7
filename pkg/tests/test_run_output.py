from kamodo_phasespace.runs import run_output
from kamodo_phasespace.models.dynamics import PhaseGrid
from kamodo_phasespace.errors import DomainError
import hashlib
import numpy as np
import pytest


def test_csv_with_metadata(tmp_path):
    filename = tmp_path / 'scan.csv'
    run_output.emit(filename, {'sigma_q': [0.5, 2.0],
                               'value': [-1/3, 0.1],
                               'sign': ['-', '0']},
                    metadata={'n': 2, 'tol': 1e-10})
    columns, metadata = run_output.read(filename)
    assert metadata == {'n': '2', 'tol': '1e-10'}
    assert list(columns) == ['sigma_q', 'value', 'sign']
    assert columns['value'][0] == -1/3
    assert list(columns['sign']) == ['-', '0']


def test_json(tmp_path):
    filename = tmp_path / 'ground.json'
    run_output.emit(filename, {'sigma': np.float64(1.5), 'n': np.int64(3),
                               'list': np.arange(2.0)})
    assert run_output.read(filename) == {'sigma': 1.5, 'n': 3,
                                         'list': [0.0, 1.0]}


def test_grid(tmp_path):
    grid = PhaseGrid.uniform((-1.0, 1.0, -2.0, 2.0), 4, 3,
                             lambda Q, P: Q + 10*P)
    grid.time = 0.25
    filename = run_output.emit(tmp_path / 'rho.bin', grid)
    assert filename.stat().st_size == 56 + 8*12
    info, values = run_output.read(filename)
    assert (info['n_q'], info['n_p']) == (4, 3)
    assert info['time'] == 0.25
    assert info['p_max'] == 2.0
    assert np.array_equal(values, grid.values)


def test_truncated_grid(tmp_path):
    filename = tmp_path / 'rho.bin'
    run_output.emit(filename, PhaseGrid.uniform((-1, 1, -1, 1), 3, 3))
    filename.write_bytes(filename.read_bytes()[:-8])
    with pytest.raises(DomainError):
        run_output.read(filename)
    (tmp_path / 'short.bin').write_bytes(b'\x00'*10)
    with pytest.raises(DomainError):
        run_output.read(tmp_path / 'short.bin')


def test_unknown_extension(tmp_path):
    with pytest.raises(DomainError):
        run_output.emit(tmp_path / 'out.nc', {})
    with pytest.raises(DomainError):
        run_output.read(tmp_path / 'out.nc')


def test_manifest(tmp_path):
    data = run_output.emit(tmp_path / 'a.json', {'x': 1})
    manifest = run_output.write_manifest(tmp_path, 'ground', {'seed': 0},
                                         [data], '0.1.0', 0)
    content = run_output.read(manifest)
    assert content['subcommand'] == 'ground'
    assert content['files']['a.json'] == \
        hashlib.sha256(data.read_bytes()).hexdigest()

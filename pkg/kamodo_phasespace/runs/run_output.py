# -*- coding: utf-8 -*-
"""
Writers and readers for run results. CSV tables carry '#' metadata lines
followed by one header row; numbers are written with 17 significant digits.

Binary grid layout (little-endian):
    int64 n_q, int64 n_p,
    float64 q_min, q_max, p_min, p_max, time,
    n_q*n_p float64 values, row-major with q as the slow index.
"""
import hashlib
import json
from pathlib import Path

import numpy as np
import pandas as pd

from kamodo_phasespace.errors import DomainError

float_format = '%.17g'
grid_header = np.dtype([('n_q', '<i8'), ('n_p', '<i8'), ('q_min', '<f8'),
                        ('q_max', '<f8'), ('p_min', '<f8'), ('p_max', '<f8'),
                        ('time', '<f8')])


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def write_csv(filename, columns, metadata=None):
    '''Write {column: 1D data} in the given column order.'''
    frame = pd.DataFrame({key: np.asarray(value) for key, value in
                          columns.items()})
    with open(filename, 'w', newline='') as handle:
        for key, value in (metadata or {}).items():
            handle.write(f'#{key}: {value}\n')
        frame.to_csv(handle, index=False, float_format=float_format)
    return filename


def read_csv(filename):
    '''Inverse of write_csv: ({column: array}, metadata).'''
    metadata = {}
    with open(filename) as handle:
        for line in handle:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].partition(':')
            metadata[key.strip()] = value.strip()
    frame = pd.read_csv(filename, comment='#', dtype={'sign': str})
    return {key: frame[key].to_numpy() for key in frame.columns}, metadata


def write_json(filename, obj):
    with open(filename, 'w') as handle:
        json.dump(obj, handle, indent=2, sort_keys=True,
                  default=_json_default)
        handle.write('\n')
    return filename


def read_json(filename):
    with open(filename) as handle:
        return json.load(handle)


def write_grid(filename, grid):
    '''Binary dump of a PhaseGrid.'''
    header = np.array([(grid.q.size, grid.p.size, *grid.bounds, grid.time)],
                      dtype=grid_header)
    with open(filename, 'wb') as handle:
        handle.write(header.tobytes())
        handle.write(np.ascontiguousarray(grid.values,
                                          dtype='<f8').tobytes())
    return filename


def read_grid(filename):
    '''Output: (header dict, values array of shape (n_q, n_p)).'''
    raw = Path(filename).read_bytes()
    if len(raw) < grid_header.itemsize:
        raise DomainError(f'{filename} is too short for a grid header.')
    header = np.frombuffer(raw[:grid_header.itemsize], dtype=grid_header)[0]
    n_q, n_p = int(header['n_q']), int(header['n_p'])
    payload = raw[grid_header.itemsize:]
    if len(payload) != 8*n_q*n_p:
        raise DomainError(f'{filename}: header declares {n_q}x{n_p} values '
                          f'but the payload holds {len(payload)//8}.')
    values = np.frombuffer(payload, dtype='<f8').reshape(n_q, n_p)
    info = {name: header[name].item() for name in grid_header.names}
    return info, values


def sha256(filename):
    digest = hashlib.sha256()
    with open(filename, 'rb') as handle:
        for block in iter(lambda: handle.read(1 << 20), b''):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(output_dir, subcommand, config, files, version, seed):
    '''Manifest with the resolved config, tool version, seed and the
    SHA-256 of every emitted file.'''
    filename = Path(output_dir) / f'{subcommand}_manifest.json'
    return write_json(filename, {
        'subcommand': subcommand, 'version': version, 'seed': seed,
        'config': config,
        'files': {Path(name).name: sha256(name) for name in files}})


def emit(filename, results, metadata=None):
    '''Write results with the writer chosen by the file extension:
    .csv (dict of columns), .json (any JSON object), .bin (PhaseGrid).'''
    file_type = str(filename).split('.')[-1]
    try:
        Path(filename).parent.mkdir(parents=True, exist_ok=True)
        if file_type == 'csv':
            return write_csv(filename, results, metadata)
        elif file_type == 'json':
            return write_json(filename, results)
        elif file_type == 'bin':
            return write_grid(filename, results)
    except OSError as err:
        raise DomainError(f'Cannot write {filename}: {err}') from err
    raise DomainError(f'File type {file_type} not recognized. Pick from '
                      "['csv', 'json', 'bin'].")


def read(filename):
    '''Reader dispatch matching emit.'''
    file_type = str(filename).split('.')[-1]
    if file_type == 'csv':
        return read_csv(filename)
    elif file_type == 'json':
        return read_json(filename)
    elif file_type == 'bin':
        return read_grid(filename)
    raise DomainError(f'File type {file_type} not recognized. Pick from '
                      "['csv', 'json', 'bin'].")

# -*- coding: utf-8 -*-
"""
Configuration tree for the command line runs.

Resolution order, later wins: the packaged phasespace.yaml, the file named
by its config_override key (if present in the working directory), the
--config file, --set key=value pairs, explicit flags. The environment
variable KAMODO_PHASESPACE_OUTPUT replaces output_dir.
"""
import os
from pathlib import Path

from omegaconf import OmegaConf

from kamodo_phasespace.errors import ConfigError

default_path = Path(__file__).resolve().parent.parent / 'phasespace.yaml'
output_env = 'KAMODO_PHASESPACE_OUTPUT'

# key: allowed values
choices = {'units': ['internal', 'display'],
           'bracket.preset': ['poisson', 'moyal', 'truncated_moyal',
                              'symbolic'],
           'spectra.family': ['energy', 'angular'],
           'evolve.schedule': ['wedge', 'constant']}

# display units: quantity -> (unit label, factor from internal units)
display_units = {'energy': ('eV', 27.211386245988),
                 'length': ('angstrom', 0.529177210903),
                 'action': ('hbar', 1.0)}


def _flat_keys(tree, prefix=''):
    keys = set()
    for key, value in tree.items():
        name = f'{prefix}{key}'
        keys.add(name)
        if isinstance(value, dict):
            keys |= _flat_keys(value, name + '.')
    return keys


def _check_keys(base, other, source):
    allowed = _flat_keys(OmegaConf.to_container(base))
    given = _flat_keys(OmegaConf.to_container(other))
    unknown = sorted(given - allowed)
    if unknown:
        section = unknown[0].rsplit('.', 1)[0] if '.' in unknown[0] else ''
        pick = sorted(key for key in allowed if
                      key.rsplit('.', 1)[0] == section and '.' in key) \
            if section else sorted(key for key in allowed if '.' not in key)
        raise ConfigError(f'Config key {unknown[0]} from {source} not '
                          f'available. Pick from {pick}.')


def _load_file(path, source):
    try:
        return OmegaConf.load(path)
    except FileNotFoundError as err:
        raise ConfigError(f'Config file {path} ({source}) not found.') \
            from err
    except Exception as err:
        raise ConfigError(f'Cannot read config file {path}: {err}') from err


def validate(cfg):
    '''Check the choice-valued keys and resolve threads: null to the number
    of available cores.'''
    for key, allowed in choices.items():
        value = OmegaConf.select(cfg, key)
        if value not in allowed:
            raise ConfigError(f'{key}={value} not available. Pick from '
                              f'{allowed}.')
    if cfg.threads is None:
        cfg.threads = os.cpu_count() or 1
    if int(cfg.threads) < 1:
        raise ConfigError('threads must be >= 1.')
    return cfg


def load_config(config_file=None, overrides=(), flags=None, environ=None,
                defaults=default_path):
    '''Resolve the configuration tree.

    Inputs:
        config_file: optional YAML file given with --config.
        overrides: dotlist strings like "scan.tol=1e-8".
        flags: {dotted key: value} from explicit command line flags; None
            values are skipped.
        environ: environment mapping (os.environ by default).
    Output: an OmegaConf DictConfig.
    '''
    environ = os.environ if environ is None else environ
    cfg = _load_file(defaults, 'packaged defaults')
    layers = []
    override = cfg.get('config_override')
    if override and Path(override).is_file() and \
            Path(override).resolve() != Path(defaults).resolve():
        layers.append((_load_file(override, 'config_override'),
                       'config_override'))
    if config_file is not None:
        layers.append((_load_file(config_file, '--config'), str(config_file)))
    if overrides:
        bad = [item for item in overrides if '=' not in item]
        if bad:
            raise ConfigError(f'--set expects key=value, got {bad[0]!r}.')
        layers.append((OmegaConf.from_dotlist(list(overrides)), '--set'))
    if flags:
        flagged = OmegaConf.create()
        for key, value in flags.items():
            if value is not None:
                OmegaConf.update(flagged, key, value, force_add=True)
        layers.append((flagged, 'command line flags'))

    for layer, source in layers:
        _check_keys(cfg, layer, source)
        cfg = OmegaConf.merge(cfg, layer)
    if environ.get(output_env):
        cfg.output_dir = environ[output_env]
    return validate(cfg)


def get(cfg, key):
    '''Dotted lookup raising ConfigError for missing keys.'''
    value = OmegaConf.select(cfg, key, default=None)
    if value is None:
        section = key.rsplit('.', 1)[0] if '.' in key else None
        node = OmegaConf.select(cfg, section) if section else cfg
        pick = sorted(node.keys()) if node is not None else []
        raise ConfigError(f'Config key {key} not available. Pick from '
                          f'{pick}.')
    return value


def to_dict(cfg):
    return OmegaConf.to_container(cfg, resolve=True)


def display(quantity, value, units):
    '''(value, unit label) converted for output.'''
    if units != 'display':
        return value, 'internal'
    label, factor = display_units[quantity]
    return value*factor, label

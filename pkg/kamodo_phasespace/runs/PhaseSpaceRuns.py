# -*- coding: utf-8 -*-
"""
Command line front end: kamodo-phasespace <subcommand> [options].

Exit codes: 0 on success, 1 for domain and configuration errors, 2 for
numerical failures (non-convergence, instability, failed acceptance).
"""
import argparse
import sys
from pathlib import Path
from time import perf_counter

from kamodo_phasespace.errors import ConfigError, DomainError, \
    NumericalError
from kamodo_phasespace.runs import run_config as RC
from kamodo_phasespace.runs import run_output as RO
from kamodo_phasespace.runs.run_wrapper import Choose_Run, run_dict


class _Parser(argparse.ArgumentParser):
    '''ArgumentParser raising ConfigError instead of exiting with code 2,
    which is reserved for numerical failures.'''

    def error(self, message):
        raise ConfigError(f'{self.prog}: {message}')


# subcommand: [(flag, dotted config key, type, help)]
subcommand_flags = {
    'bracket': [('--f', 'bracket.f', str,
                 'first operand (expression or catalog name like L3)'),
                ('--g', 'bracket.g', str, 'second operand'),
                ('--order', 'bracket.order', int, 'truncation order N'),
                ('--preset', 'bracket.preset', str,
                 'poisson | moyal | truncated_moyal | symbolic'),
                ('--hbar', 'bracket.hbar', str, 'hbar value or symbol')],
    'spectra': [('--family', 'spectra.family', str, 'energy | angular'),
                ('--n', 'spectra.n', int, 'number of energy members'),
                ('--samples', 'spectra.samples', int, 'x samples')],
    'scan': [('--n', 'scan.n', int, 'level of the scanned measure'),
             ('--tol', 'scan.tol', float, 'quadrature tolerance')],
    'ground': [('--tol', 'ground.tol', float, 'bisection tolerance')],
    'zeeman': [('--n-max', 'zeeman.n_max', int, 'largest level'),
               ('--B', 'zeeman.B', float, 'magnetic field')],
    'evolve': [('--a1', 'evolve.a1', float, 'first bracket coefficient'),
               ('--n', 'evolve.n', int, 'grid points per axis'),
               ('--cfl', 'evolve.cfl', float, 'CFL factor'),
               ('--schedule', 'evolve.schedule', str, 'wedge | constant')],
    'excite': [('--samples', 'excite.samples', int, 'time samples'),
               ('--t-max', 'excite.t_max', float, 'end of the window')],
    'scatter': [('--n-particles', 'scatter.n_particles', int,
                 'number of trajectories'),
                ('--b-max', 'scatter.b_max', float, 'beam radius'),
                ('--repulsive', 'scatter.repulsive', 'flag',
                 'repulsive Coulomb potential')],
    'verify': [('--quick', 'verify.quick', 'flag',
                'reduced acceptance run')]}


def build_parser():
    parser = _Parser(prog='kamodo-phasespace',
                     description='Generalized phase-space theory runs.')
    parser.add_argument('--config', help='YAML file merged over defaults')
    parser.add_argument('--set', action='append', default=[],
                        metavar='KEY=VALUE', help='dotlist override')
    parser.add_argument('--output-dir', help='output directory')
    parser.add_argument('--threads', type=int, help='worker threads')
    parser.add_argument('--seed', type=int, help='random seed')
    parser.add_argument('--units', help='internal | display')
    parser.add_argument('--verbose', action='store_true', default=None)
    sub = parser.add_subparsers(dest='subcommand', parser_class=_Parser)
    for name, flags in subcommand_flags.items():
        child = sub.add_parser(name, help=run_dict[name])
        for flag, key, kind, text in flags:
            if kind == 'flag':
                child.add_argument(flag, dest=key, action='store_true',
                                   default=None, help=text)
            else:
                child.add_argument(flag, dest=key, type=kind, help=text)
    return parser


def _flags(args):
    global_keys = {'output_dir': args.output_dir, 'threads': args.threads,
                   'seed': args.seed, 'units': args.units,
                   'verbose': args.verbose}
    local = {key: value for key, value in vars(args).items() if '.' in key}
    return {**global_keys, **local}


def run(argv=None):
    '''Parse argv, run the subcommand and return the exit code.'''
    from kamodo_phasespace import __version__

    try:
        args = build_parser().parse_args(argv)
        if args.subcommand is None:
            Choose_Run('')
            raise ConfigError('No subcommand given.')
        cfg = RC.load_config(args.config, args.set, _flags(args))
        output_dir = Path(cfg.output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        t0 = perf_counter()
        files = Choose_Run(args.subcommand)(cfg, output_dir)
        RO.write_manifest(output_dir, args.subcommand, RC.to_dict(cfg),
                          files, __version__, cfg.seed)
        if cfg.verbose:
            print(f'Took {perf_counter()-t0:.5f}s to run '
                  f'{args.subcommand}.', file=sys.stderr)
    except SystemExit as err:
        return int(err.code or 0)
    except DomainError as err:
        print(f'error: {err}', file=sys.stderr)
        return 1
    except NumericalError as err:
        print(f'numerical failure: {err}', file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()

# -*- coding: utf-8 -*-
"""
Registry of the command line runs. Each run takes the resolved config and
an output directory, writes its files through run_output.emit and returns
the list of written files.
"""
from pathlib import Path
from time import perf_counter

import numpy as np

from kamodo_phasespace.runs import run_output as RO
from kamodo_phasespace.runs.run_config import display

run_dict = {'bracket': 'Generalized bracket of two phase-space expressions',
            'spectra': 'Sawtooth families T_n^H or T_m^L on an x grid',
            'scan': 'Sign map of <g_H(E_2), rho_G> over (sigma_q, sigma_p)',
            'ground': 'Ground-state width, energy ratio and radius',
            'zeeman': 'Zeeman support bounds and shifted levels',
            'evolve': 'hbar^2-corrected anharmonic phase-space evolution',
            'excite': 'Level probabilities under a resonant electric drive',
            'scatter': 'Rutherford cross section by trajectory Monte Carlo',
            'verify': 'Acceptance suite with a pass/fail table'}

# column legends of the emitted tables
run_columns = {
    'spectra': 'x, then one column per family member (T_1.. or T_-3..)',
    'scan': 'sigma_q, sigma_p, value, error, sign (+, -, 0 inside the '
            'error band, ? for failed quadrature)',
    'zeeman_support': 'n, stated_bound, observed_max, search_max',
    'zeeman_levels': 'n, m, E_n, shifted_level',
    'evolve': 't, mean_q, mean_p, mean_p2, mass, mean_F, mean_H',
    'excite': 't, pr_E1, pr_E2, pr_qt_E1, pr_qt_E2',
    'scatter': 'theta_mid, estimate, stderr, rutherford_formula, ratio'}


def _print_table(rows, headers):
    widths = [max(len(str(h)), *(len(str(r[i])) for r in rows))
              for i, h in enumerate(headers)]
    print('  '.join(str(h).ljust(w) for h, w in zip(headers, widths)))
    print('  '.join('-'*w for w in widths))
    for row in rows:
        print('  '.join(str(x).ljust(w) for x, w in zip(row, widths)))


def bracket_run(cfg, output_dir):
    from kamodo_phasespace.algebra import BracketSpec, gmb, \
        check_zero_orderwise
    from kamodo_phasespace.algebra.hamiltonians import named_expression

    section = cfg.bracket
    spec = BracketSpec.from_name(section.preset, int(section.order),
                                 section.hbar)
    f, g = named_expression(str(section.f)), named_expression(str(section.g))
    result, complete = gmb(f, g, spec, return_complete=True,
                           verbose=cfg.verbose)
    zero = check_zero_orderwise(f, g, spec.max_order)
    print(f'{{f, g}} = {result}')
    if not complete:
        print('Orders above', spec.max_order, 'may contribute.')
    return [RO.emit(Path(output_dir) / 'bracket.json', {
        'f': str(f), 'g': str(g), 'spec': spec.describe(),
        'result': result.to_json_obj(), 'text': str(result),
        'complete': complete,
        'zero_orders': {str(2*i+1): flag for i, flag in enumerate(zero)}})]


def spectra_run(cfg, output_dir):
    from kamodo_phasespace.models import spectral

    section = cfg.spectra
    x = np.linspace(section.x_min, section.x_max, int(section.samples))
    if section.family == 'energy':
        family = spectral.energy_family(x, int(section.n))
        columns = {f'T_{n}': values for n, values in family.items()}
        x_out, unit = display('energy', x, cfg.units)
    else:
        family = spectral.angular_family(x, (int(section.m_min),
                                             int(section.m_max)))
        columns = {f'T_{m}': values for m, values in family.items()}
        x_out, unit = display('action', x, cfg.units)
    return [RO.emit(Path(output_dir) / f'spectra_{section.family}.csv',
                    {'x': x_out, **columns},
                    {'family': section.family, 'x units': unit,
                     'columns': run_columns['spectra']})]


def scan_run(cfg, output_dir):
    from kamodo_phasespace.models import states

    section = cfg.scan
    sq = np.linspace(section.sigma_q.min, section.sigma_q.max,
                     int(section.sigma_q.num))
    sp = np.linspace(section.sigma_p.min, section.sigma_p.max,
                     int(section.sigma_p.num))
    cells = states.positivity_scan(sq, sp, int(section.n), section.tol,
                                   cfg.threads, cfg.verbose)
    columns = {name: [getattr(cell, name) for cell in cells]
               for name in states.ScanCell._fields}
    counts = {sign: sum(cell.sign == sign for cell in cells)
              for sign in '+-0?'}
    return [RO.emit(Path(output_dir) / 'scan.csv', columns,
                    {'observable': f'g_H(E_{section.n})',
                     'columns': run_columns['scan']}),
            RO.emit(Path(output_dir) / 'scan.json',
                    {'cells': len(cells), 'signs': counts})]


def ground_run(cfg, output_dir):
    from kamodo_phasespace.models import states

    t0 = perf_counter()
    result = states.ground(cfg.ground.tol)
    radius, unit = display('length', result.most_probable_radius, cfg.units)
    out = {'sigma_gnd': result.sigma_gnd,
           'mean_energy_ratio': result.mean_energy_ratio,
           'most_probable_radius': radius, 'length_units': unit}
    print(f"sigma_gnd = {result.sigma_gnd:.11f}")
    if cfg.verbose:
        print(f'Took {perf_counter()-t0:.5f}s to find the ground state.')
    return [RO.emit(Path(output_dir) / 'ground.json', out)]


def zeeman_run(cfg, output_dir):
    from kamodo_phasespace.models import spectral

    section = cfg.zeeman
    support = {'n': [], 'stated_bound': [], 'observed_max': [],
               'search_max': []}
    levels = {'n': [], 'm': [], 'E_n': [], 'shifted_level': []}
    for n in range(1, int(section.n_max)+1):
        result = spectral.zeeman_support(n, int(section.samples), cfg.seed)
        support['n'].append(n)
        for key in ('stated_bound', 'observed_max', 'search_max'):
            support[key].append(getattr(result, key))
        E_n = float(spectral.energy_level(n))
        for m in range(-result.observed_max, result.observed_max+1):
            levels['n'].append(n)
            levels['m'].append(m)
            levels['E_n'].append(display('energy', E_n, cfg.units)[0])
            levels['shifted_level'].append(display(
                'energy', E_n + spectral.mu_B*section.B*m, cfg.units)[0])
    unit = display('energy', 0.0, cfg.units)[1]
    return [RO.emit(Path(output_dir) / 'zeeman_support.csv', support,
                    {'columns': run_columns['zeeman_support']}),
            RO.emit(Path(output_dir) / 'zeeman_levels.csv', levels,
                    {'B': section.B, 'energy units': unit,
                     'columns': run_columns['zeeman_levels']})]


def evolve_run(cfg, output_dir):
    from kamodo_phasespace.models import dynamics

    section = cfg.evolve
    result = dynamics.anharmonic_run(
        a1=float(section.a1), n=int(section.n), n_p=int(section.n_p),
        half_width=float(section.half_width),
        p_half_width=float(section.p_half_width), q0=float(section.q0),
        p0=float(section.p0), verbose=cfg.verbose, hbar=float(section.hbar),
        cfl=float(section.cfl), schedule=section.schedule,
        lam_peak=float(section.lam_peak), t_end=float(section.t_end))
    series = result.moments
    res_q, res_p = dynamics.ehrenfest_residual(series)
    summary = {'mean_p2_final': series['mean_p2'][-1],
               'mass_drift': float(np.max(np.abs(series['mass'] -
                                                 series['mass'][0]))),
               'energy_drift': float(np.max(np.abs(series['mean_H'] -
                                                   series['mean_H'][0]))),
               'ehrenfest_q': res_q, 'ehrenfest_p': res_p,
               'boundary_ratio': result.boundary_ratio,
               'dt': result.dt, 'steps': result.steps, 'a1': section.a1}
    print(f"<p^2>(t_end) = {summary['mean_p2_final']:.6f}")
    return [RO.emit(Path(output_dir) / 'evolve_moments.csv', series,
                    {'a1': section.a1, 'columns': run_columns['evolve']}),
            RO.emit(Path(output_dir) / 'evolve_field.bin', result.grid),
            RO.emit(Path(output_dir) / 'evolve.json', summary)]


def excite_run(cfg, output_dir):
    from kamodo_phasespace.models import field

    section = cfg.excite
    drive = field.DriveSpec(t_max=float(section.t_max),
                            n_samples=int(section.samples))
    rows = field.excitation_curve(drive, threads=cfg.threads,
                                  verbose=cfg.verbose)
    columns = {name: [getattr(row, name) for row in rows]
               for name in field.ExcitationRow._fields}
    return [RO.emit(Path(output_dir) / 'excite.csv', columns,
                    {'omega': drive.omega, 'eE': drive.eE,
                     'columns': run_columns['excite']}),
            RO.emit(Path(output_dir) / 'excite.json',
                    {'agreement': field.agreement(rows),
                     'max_total': max(r.pr_E1 + r.pr_E2 for r in rows)})]


def scatter_config(section, seed):
    from kamodo_phasespace.models.scattering import ScatterConfig

    edges = tuple(range(int(section.bin_min), int(section.bin_max)+1,
                        int(section.bin_width)))
    return ScatterConfig(p0=float(section.p0), b_max=float(section.b_max),
                         n_particles=int(section.n_particles),
                         bin_edges=edges, seed=int(seed),
                         repulsive=bool(section.repulsive),
                         n_table=int(section.n_table),
                         n_check=int(section.n_check),
                         stratified=bool(section.stratified))


def scatter_run(cfg, output_dir):
    from kamodo_phasespace.models import scattering

    config = scatter_config(cfg.scatter, cfg.seed)
    result = scattering.cross_section(config, cfg.threads,
                                      verbose=cfg.verbose)
    columns = {name: [getattr(row, name) for row in result.bins]
               for name in ('theta_mid', 'estimate', 'stderr',
                            'rutherford_formula', 'ratio')}
    return [RO.emit(Path(output_dir) / 'scatter.csv', columns,
                    {'columns': run_columns['scatter']}),
            RO.emit(Path(output_dir) / 'scatter.json',
                    {'chi2': result.chi2, 'dof': result.dof,
                     'reduced_chi2': result.chi2/max(result.dof, 1),
                     'seed': result.seed,
                     'interp_error': result.interp_error})]


def verify_run(cfg, output_dir):
    from kamodo_phasespace.runs import verify

    return verify.run_suite(cfg, output_dir)


def Choose_Run(name=''):
    '''Returns the run function for the requested subcommand.

    Input:
        name: subcommand name. If empty, the available runs are printed and
            None is returned.
    '''
    if name == '':
        print('Possible runs are: ')
        for key, desc in run_dict.items():
            print(f'{key}: {desc}')
        return
    runs = {'bracket': bracket_run, 'spectra': spectra_run,
            'scan': scan_run, 'ground': ground_run, 'zeeman': zeeman_run,
            'evolve': evolve_run, 'excite': excite_run,
            'scatter': scatter_run, 'verify': verify_run}
    if name not in runs:
        from kamodo_phasespace.errors import ConfigError
        raise ConfigError(f'Run {name} not available. Pick from '
                          f'{list(run_dict)}.')
    return runs[name]

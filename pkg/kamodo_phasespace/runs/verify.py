# -*- coding: utf-8 -*-
"""
Acceptance suite behind `kamodo-phasespace verify`.

Every check returns a Check row. The suite prints the table, writes
verify.json and raises NumericalError when a row fails, which the command
line maps to exit code 2. verify.quick swaps in smaller grids and sample
counts with correspondingly looser tolerances.
"""
from collections import namedtuple
from math import factorial
from pathlib import Path
from time import perf_counter

import numpy as np

from kamodo_phasespace.errors import NumericalError, PhaseSpaceError
from kamodo_phasespace.runs import run_output as RO

Check = namedtuple('Check', ['name', 'passed', 'value', 'target',
                             'seconds'])

# sizes of the full and the quick suite
sizes = {'full': {'partition_samples': 10**6, 'evolve_n': 512,
                  'evolve_tol': 0.005, 'evolve_slope_tol': 0.1,
                  'evolve_halving_tol': 2e-3, 'evolve_seconds': 600.0,
                  'scan_mc': 10**7, 'excite_samples': 200, 'n_table': 400,
                  'n_particles': 10**6, 'n_check': 200},
         'quick': {'partition_samples': 10**5, 'evolve_n': 256,
                   'evolve_tol': 0.01, 'evolve_slope_tol': 0.2,
                   'evolve_halving_tol': 5e-3, 'evolve_seconds': 600.0,
                   'scan_mc': 10**6, 'excite_samples': 40, 'n_table': 250,
                   'n_particles': 10**6, 'n_check': 50}}

p2_intercept, p2_slope = 0.6795, 0.0823


def _fmt(value):
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def check_ground(size):
    from kamodo_phasespace.models import states

    t0 = perf_counter()
    sigma = states.find_sigma_gnd(1e-10)
    seconds = perf_counter() - t0
    passed = abs(sigma - states.ground_sigma) <= 1e-6 and seconds <= 10.0
    return [Check('sigma_gnd', passed, sigma, '1.59577048804 +- 1e-6, '
                  '<= 10 s', seconds)]


def check_ground_energy(size):
    from kamodo_phasespace.models import states

    state = states.ground_state(states.ground_sigma)
    ratio = states.mean_energy(state)/-0.5
    radius = states.most_probable_radius(state)
    return [Check('energy_ratio', 0.0 < 1.0 - ratio <= 1e-5, ratio,
                  '1 - 1e-5 <= ratio < 1', 0.0),
            Check('most_probable_radius', abs(radius - 2.257) <= 1e-3,
                  radius, '2.257 +- 0.001', 0.0)]


def check_partition(size):
    from kamodo_phasespace.models import spectral

    rng = np.random.default_rng(0)
    n = size['partition_samples']
    x = rng.uniform(-1.0, -1e-6, n)
    total, moment, spill = spectral.partition_residuals(x)
    y = rng.uniform(-10.0, 10.0, n)
    a_total, a_moment = spectral.angular_partition_residuals(y)
    return [Check('energy_partition', total <= 1e-12 and spill == 0.0,
                  total, '<= 1e-12', 0.0),
            Check('energy_first_moment', moment <= 1e-12, moment,
                  '<= 1e-12', 0.0),
            Check('angular_partition', a_total <= 1e-14 and
                  a_moment <= 1e-12, max(a_total, a_moment), '<= 1e-14',
                  0.0)]


def check_conservation(size):
    from kamodo_phasespace.algebra import check_zero_orderwise
    from kamodo_phasespace.algebra.hamiltonians import conserved_quantities

    t0 = perf_counter()
    quantities = conserved_quantities()
    H = quantities['hydrogen']
    failed = [name for name, X in quantities.items()
              if not all(check_zero_orderwise(H, X, 3))]
    seconds = perf_counter() - t0
    return [Check('conserved_quantities', not failed and seconds <= 60.0,
                  ','.join(failed) or 'all zero', 'H, L_i, A_i to K=3',
                  seconds)]


def check_exact_identities(size):
    from kamodo_phasespace.algebra.bracket import qp_power_identity, \
        qp_shift_example
    from kamodo_phasespace.algebra.phase_expr import PhaseExpr

    rows = []
    for n in range(1, 5):
        value = qp_power_identity(n)
        expected = PhaseExpr.const((-1)**n*factorial(2*n) *
                                   factorial(n)**2)
        rows.append(Check(f'qp_power_{n}', (value - expected).is_zero(),
                          str(value), str(expected), 0.0))
    for n in range(1, 4):
        value, expected = qp_shift_example(n)
        rows.append(Check(f'qp_shift_{n}', (value - expected).is_zero(),
                          str(value), str(expected), 0.0))
    return rows


def check_five_step(size):
    from kamodo_phasespace.algebra import BracketSpec, liouvillian_product
    from kamodo_phasespace.algebra.hamiltonians import five_step_inputs, \
        five_step_coefficient

    steps, target = five_step_inputs(5)
    product = liouvillian_product(steps, target, BracketSpec.symbolic(1))
    c = five_step_coefficient(product)
    return [Check('five_step_coefficient', c == 1728, str(c), '1728', 0.0)]


def _evolve(a1, n):
    from kamodo_phasespace.models import dynamics
    t0 = perf_counter()
    run = dynamics.anharmonic_run(a1=a1, n=n)
    return run, perf_counter() - t0


def check_evolution(size):
    from kamodo_phasespace.models import dynamics

    rows = []
    tol = size['evolve_tol']
    runs = {a1: _evolve(a1, size['evolve_n']) for a1 in (0.0, -1.0/48,
                                                          -1.0/24)}
    p2 = {a1: run.moments['mean_p2'][-1] for a1, (run, _) in runs.items()}
    for a1, (run, seconds) in runs.items():
        target = p2_intercept + p2_slope*a1
        rows.append(Check(f'mean_p2(a1={a1:.5f})', abs(p2[a1] - target) <=
                          tol and seconds <= size['evolve_seconds'], p2[a1],
                          f'{target:.5f} +- {tol}, <= '
                          f"{size['evolve_seconds']:.0f} s", seconds))
    slope = np.polyfit(list(p2), list(p2.values()), 1)[0]
    slope_tol = size['evolve_slope_tol']*p2_slope
    rows.append(Check('mean_p2_slope', abs(slope - p2_slope) <= slope_tol,
                      float(slope), f'{p2_slope} +- {slope_tol:.4f}', 0.0))
    boundary = max(run.boundary_ratio for run, _ in runs.values())
    rows.append(Check('boundary_ring', boundary <= 1e-10, boundary,
                      '<= 1e-10', 0.0))

    fine, seconds = runs[0.0]
    mass = fine.moments['mass']
    drift = float(np.max(np.abs(mass - mass[0])))
    rows.append(Check('mass_drift', drift <= 1e-6, drift, '<= 1e-6',
                      seconds))
    res_q, res_p = dynamics.ehrenfest_residual(fine.moments)
    rows.append(Check('ehrenfest', max(res_q, res_p) <= 1e-3,
                      max(res_q, res_p), '<= 1e-3', 0.0))
    coarse, _ = _evolve(0.0, size['evolve_n']//2)
    halving = abs(coarse.moments['mean_p2'][-1] - p2[0.0])
    halving_tol = size['evolve_halving_tol']
    rows.append(Check('grid_halving', halving <= halving_tol, halving,
                      f'<= {halving_tol}', 0.0))
    return rows


def check_positivity(size):
    from kamodo_phasespace.models import states

    rows = []
    f = states.observable_g_h(2)
    for (sq, sp), want in (((0.5, 0.5), '-'), ((2.0, 0.5), '+')):
        state = states.GaussianState(sq, sp)
        value, error = states.expect(f, state)
        mc, stderr = states.expect_mc(f, state, size['scan_mc'], seed=0)
        sign_ok = value < -error if want == '-' else value >= -error
        rows.append(Check(f'g_H(E_2) at ({sq}, {sp})', sign_ok, value,
                          '< 0' if want == '-' else '>= 0', 0.0))
        rows.append(Check(f'monte_carlo ({sq}, {sp})',
                          abs(mc - value) <= 3*stderr + error,
                          abs(mc - value), f'<= 3 stderr = {3*stderr:.2e}',
                          0.0))
    cells = states.positivity_scan(np.linspace(0.25, 4.0, 12),
                                   [0.1, 0.5, 1.0], 2)
    monotone = True
    for sp in (0.1, 0.5, 1.0):
        signs = [c.sign for c in cells if c.sigma_p == sp and c.sign in '+-']
        first = signs.index('+') if '+' in signs else len(signs)
        monotone &= '-' not in signs[first:]
    rows.append(Check('sign_boundary_monotone', monotone, monotone,
                      'True', 0.0))
    return rows


def check_zeeman(size):
    from kamodo_phasespace.models import spectral

    rows = []
    for n in range(1, 5):
        result = spectral.zeeman_support(n)
        passed = result.search_max <= result.stated_bound and \
            result.search_max == result.observed_max == n+1
        rows.append(Check(f'zeeman_support_{n}', passed, result.search_max,
                          f'{n+1} <= {result.stated_bound}', 0.0))
    return rows


def check_excitation(size):
    from kamodo_phasespace.models import field

    drive = field.DriveSpec(n_samples=size['excite_samples'])
    rows_out = field.excitation_curve(drive)
    start = abs(rows_out[0].pr_E2)
    later = all(row.pr_E2 > 0 for row in rows_out[1:])
    total = max(row.pr_E1 + row.pr_E2 for row in rows_out)
    worst = field.agreement(rows_out)
    return [Check('pr_E2(0)', start <= 1e-8, start, '<= 1e-8', 0.0),
            Check('pr_E2(t > 0) > 0', later, later, 'True', 0.0),
            Check('pr_E1 + pr_E2', total <= 1 + 1e-8, total,
                  '<= 1 + 1e-8', 0.0),
            Check('classical_vs_quantum_E1', worst <= 1e-2, worst,
                  '<= 1e-2', 0.0)]


def check_scattering(size):
    from kamodo_phasespace.models import scattering

    rows = []
    worst = 0.0
    for degrees in (30, 60, 90, 120):
        theta = np.deg2rad(degrees)
        b = float(scattering.rutherford_impact(theta))
        angle = scattering.trajectory_angle(b)
        worst = max(worst, abs(angle - theta))
    rows.append(Check('trajectory_oracle', worst <= 1e-6, worst, '<= 1e-6',
                      0.0))

    t0 = perf_counter()
    config = scattering.ScatterConfig(n_particles=size['n_particles'],
                                      n_table=size['n_table'],
                                      n_check=size['n_check'])
    result = scattering.cross_section(config)
    seconds = perf_counter() - t0
    rows.append(Check('rutherford_chi2', result.chi2 <= 2*result.dof and
                      seconds <= 300.0, result.chi2,
                      f'<= {2*result.dof}', seconds))
    lo, hi = config.chi2_range
    ratios = [row.ratio for row in result.bins if lo <= row.theta_mid <= hi]
    spread = float(max(abs(r - 1.0) for r in ratios))
    rows.append(Check('rutherford_bins', spread <= 0.05, spread, '<= 0.05',
                      0.0))
    rows.append(Check('direct_subsample', result.interp_error <= 1e-4,
                      result.interp_error, '<= 1e-4', 0.0))
    return rows


def check_ledger(size):
    from kamodo_phasespace.models import scattering

    ledger = scattering.exponent_table(20)
    raw, kept = ledger.survivors_raw(), ledger.survivors()
    passed = raw == [(0, 0), (0, 1), (0, 2), (1, 0)] and \
        kept == [(0, 0), (0, 1), (0, 2)] and \
        ledger.verdict() == scattering.far_field_verdict
    return [Check('exponent_ledger', passed, str(kept), '[(0,0),(0,1),(0,2)]',
                  0.0)]


def check_properties(size):
    from kamodo_phasespace.algebra import BracketSpec, PhaseExpr, \
        adjointness_check, jacobiator, leibniz_defect
    from kamodo_phasespace.algebra.bracket import property_report, \
        jacobi_witness, leibniz_witness

    rows = []
    report = property_report(BracketSpec.moyal(3),
                             np.random.default_rng(0))
    rows.append(Check('bracket_properties', all(report.values()),
                      ','.join(k for k, v in report.items() if not v) or
                      'all hold', 'all hold', 0.0))
    f = 'exp(-(q1**2 + p1**2)/2)'
    g = 'q1*exp(-(q1**2 + p1**2)/2)'
    poisson = adjointness_check(PhaseExpr.parse('q1^2'), f, g,
                                BracketSpec.poisson())
    quartic = adjointness_check(PhaseExpr.parse('q1^4'), f, g,
                                BracketSpec.moyal(1))
    rows.append(Check('adjoint_poisson', poisson <= 1e-8, poisson,
                      '<= 1e-8', 0.0))
    rows.append(Check('adjoint_moyal_quartic', quartic <= 1e-6, quartic,
                      '<= 1e-6', 0.0))
    jac = jacobiator(*jacobi_witness, BracketSpec.truncated_moyal(2, 1))
    leib = leibniz_defect(*leibniz_witness, BracketSpec.moyal(1))
    rows.append(Check('jacobi_witness', not jac.is_zero(), str(jac),
                      'nonzero', 0.0))
    rows.append(Check('leibniz_witness', not leib.is_zero(), str(leib),
                      'nonzero', 0.0))
    return rows


suite = [('ground', check_ground), ('ground_energy', check_ground_energy),
         ('partition', check_partition),
         ('conservation', check_conservation),
         ('exact_identities', check_exact_identities),
         ('five_step', check_five_step), ('evolution', check_evolution),
         ('positivity', check_positivity), ('zeeman', check_zeeman),
         ('excitation', check_excitation),
         ('scattering', check_scattering), ('ledger', check_ledger),
         ('properties', check_properties)]


def run_suite(cfg, output_dir, checks=None):
    '''Run the acceptance checks and write verify.json.

    Inputs:
        cfg: resolved configuration; cfg.verify.quick selects the reduced
            sizes.
        output_dir: directory for verify.json.
        checks: optional list of suite names to run (all by default).
    Output: list of written files. Raises NumericalError if any check
        fails; the file is written first.
    '''
    size = sizes['quick' if cfg.verify.quick else 'full']
    rows = []
    for name, func in suite:
        if checks is not None and name not in checks:
            continue
        t0 = perf_counter()
        try:
            found = func(size)
        except PhaseSpaceError as err:
            found = [Check(name, False, f'{type(err).__name__}: {err}',
                           'no error', perf_counter() - t0)]
        rows.extend(found)
        if cfg.verbose:
            print(f'Took {perf_counter()-t0:.5f}s to run the {name} '
                  'checks.')

    from kamodo_phasespace.runs.run_wrapper import _print_table
    _print_table([(r.name, 'PASS' if r.passed else 'FAIL', _fmt(r.value),
                   r.target, f'{r.seconds:.2f}') for r in rows],
                 ['check', 'result', 'value', 'target', 'seconds'])
    failed = [r.name for r in rows if not r.passed]
    out = RO.emit(Path(output_dir) / 'verify.json', {
        'mode': 'quick' if cfg.verify.quick else 'full',
        'passed': not failed, 'failed': failed,
        'checks': [{'name': r.name, 'passed': bool(r.passed),
                    'value': _fmt(r.value), 'target': r.target,
                    'seconds': r.seconds} for r in rows]})
    if failed:
        raise NumericalError(f'{len(failed)} acceptance checks failed: '
                             f'{failed}.')
    return [out]

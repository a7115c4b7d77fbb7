# -*- coding: utf-8 -*-
"""
Isotropic Gaussian states of the toy hydrogen atom and the phase-space
expectation engine.

    rho_G(q, p) = (2 pi)**-3 sigma_q**-3 sigma_p**-3
                  exp(-|q|**2/(2 sigma_q**2) - |p|**2/(2 sigma_p**2))

sigma_p = 0 is the momentum-delta limit rho_gnd used for the ground state.
Observables are functions of (|q|, |p|) only, so every expectation reduces to

    <f, rho> = 16 pi**2 int int q**2 p**2 f(q, p) rho(q, p) dq dp

(or 4 pi int q**2 f(q, 0) rho_q(q) dq in the delta limit). The integrands
are piecewise smooth in H = p**2/2 - 1/q; the quadrature panels are split on
the curves where H crosses a kink energy of the observable.
"""
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter
import warnings

import numpy as np
from scipy import integrate, optimize

from kamodo_phasespace.errors import ConvergenceError, DomainError, \
    NumericalError
from kamodo_phasespace.models.spectral import energy_level, t_h

# variable name: [kamodo name, description, index, coordinate system,
#                 coordinate type, [coordinates], display units]
model_varnames = {'rho_q': ['rho_q', 'Position marginal density', 0,
                            'internal', 'radial', ['q'], 'a0^-3'],
                  'rho_p': ['rho_p', 'Momentum marginal density', 0,
                            'internal', 'radial', ['p'], '(hbar/a0)^-3'],
                  'gH2_scan': ['gH2_scan', '<g_H(E_2), rho_G> on the '
                               '(sigma_q, sigma_p) grid', 0, 'internal',
                               'width', ['sigma_q', 'sigma_p'], '']}

truncation = 12.0  # domain truncation in standard deviations
sigma_bracket = (1.0, 2.5)
ground_sigma = 1.59577048804

ScanCell = namedtuple('ScanCell',
                      ['sigma_q', 'sigma_p', 'value', 'error', 'sign'])
GroundState = namedtuple('GroundState', ['sigma_gnd', 'mean_energy_ratio',
                                         'most_probable_radius'])


@dataclass(frozen=True)
class GaussianState:
    '''Isotropic Gaussian in phase space, normalized by construction.'''
    sigma_q: float
    sigma_p: float = 0.0

    def __post_init__(self):
        if not self.sigma_q > 0:
            raise DomainError(f'sigma_q must be positive, got {self.sigma_q}.')
        if not self.sigma_p >= 0:
            raise DomainError('sigma_p must be nonnegative, got '
                              f'{self.sigma_p}.')

    @property
    def is_delta(self):
        return self.sigma_p == 0.0

    def position_marginal(self, q):
        '''rho_q(|q|) per unit volume d**3 q.'''
        return _gauss3(np.asarray(q, dtype=float), self.sigma_q)

    def momentum_marginal(self, p):
        '''rho_p(|p|) per unit volume d**3 p. Undefined in the delta limit.'''
        if self.is_delta:
            raise DomainError('The momentum marginal of a sigma_p = 0 state '
                              'is a delta distribution.')
        return _gauss3(np.asarray(p, dtype=float), self.sigma_p)

    def density(self, q, p):
        return self.position_marginal(q) * self.momentum_marginal(p)

    def sample(self, rng, n_samples):
        '''(n_samples, 6) phase-space points drawn from the state.'''
        q = rng.normal(0.0, self.sigma_q, (n_samples, 3))
        if self.is_delta:
            p = np.zeros((n_samples, 3))
        else:
            p = rng.normal(0.0, self.sigma_p, (n_samples, 3))
        return np.concatenate([q, p], axis=1)


def ground_state(sigma=ground_sigma):
    return GaussianState(sigma, 0.0)


def _gauss3(r, sigma):
    return (2*np.pi)**-1.5 * sigma**-3 * np.exp(-0.5*(r/sigma)**2)


@dataclass(frozen=True)
class RadialObservable:
    '''f(|q|, |p|), vectorized, with the energies where f (as a function
    of H) has kinks.'''
    func: object
    kinks: tuple = ()
    name: str = 'f'

    def __call__(self, q, p):
        return self.func(q, p)


def observable_one():
    return RadialObservable(lambda q, p: np.ones_like(np.asarray(q * p,
                                                                 dtype=float)),
                            name='1')


def observable_hamiltonian():
    return RadialObservable(lambda q, p: 0.5*np.asarray(p)**2 - 1.0/q,
                            name='H')


def observable_g_h(n):
    '''g_H(E_n) = T_n^H(H) as a radial observable.'''
    kinks = tuple(float(energy_level(k)) for k in (n-1, n, n+1) if k >= 1)
    return RadialObservable(
        lambda q, p: t_h(n, 0.5*np.asarray(p)**2 - 1.0/q, strict=False),
        kinks, f'g_H(E_{n})')


def _as_observable(observable):
    if isinstance(observable, RadialObservable):
        return observable
    if callable(observable):
        return RadialObservable(observable)
    raise DomainError(f'{observable!r} is not a radial observable.')


def _q_points(kinks, q_max):
    '''Radii where -1/q equals a kink energy, i.e. where a kink curve in the
    (q, p) plane meets p = 0.'''
    return sorted(-1.0/E for E in kinks if E < 0 and -1.0/E < q_max)


def _inner_panels(q, kinks, p_max, n_nodes):
    '''Gauss-Legendre nodes and weights on [0, p_max] split where
    p**2/2 - 1/q crosses a kink energy.'''
    cuts = [np.sqrt(2.0*(E + 1.0/q)) for E in kinks if E + 1.0/q > 0]
    edges = np.unique([0.0, p_max] + [c for c in cuts if c < p_max])
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5*np.diff(edges)
    mid = 0.5*(edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None]*x[None, :]).ravel()
    weights = (half[:, None]*w[None, :]).ravel()
    return nodes, weights


def quad_checked(func, lower, upper, points, tol, limit):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', integrate.IntegrationWarning)
        value, error = integrate.quad(func, lower, upper, points=points or
                                      None, epsabs=tol, epsrel=1e-12,
                                      limit=limit)
    if caught:
        if error > tol:
            raise ConvergenceError(
                f'Quadrature did not converge: estimate {error:.3e} exceeds '
                f'tol={tol:.1e}.', partial=value, error_estimate=error)
        warnings.warn(str(caught[0].message))
    return value, error


def expect(observable, state, tol=1e-10, n_nodes=64, limit=400,
           verbose=False):
    '''Phase-space expectation <f, rho> of a radial observable.

    Inputs:
        observable: RadialObservable (or a vectorized callable f(q, p) of
            the magnitudes |q| and |p|).
        state: GaussianState.
        tol: absolute tolerance of the outer adaptive quadrature.
        n_nodes: Gauss-Legendre nodes per inner panel (the inner integrand
            is smooth on each panel).
        limit: maximum number of subintervals of the outer quadrature.
    Output: (value, error_estimate). ConvergenceError when the limit is
        exhausted above tol, carrying the partial result.
    '''
    if not tol > 0:
        raise DomainError(f'tol must be positive, got {tol}.')
    t0 = perf_counter()
    f = _as_observable(observable)
    q_max = truncation*state.sigma_q
    points = _q_points(f.kinks, q_max)

    if state.is_delta:
        def integrand(q):
            return 4*np.pi*q*q*_gauss3(q, state.sigma_q) * \
                float(f(max(q, 1e-300), 0.0))
        value, error = quad_checked(integrand, 0.0, q_max, points, tol,
                                    limit)
    else:
        p_max = truncation*state.sigma_p
        inner_error = [0.0]
        prefactor = 16*np.pi**2 * (2*np.pi)**-3 * \
            (state.sigma_q*state.sigma_p)**-3

        def inner(q, nodes, weights):
            vals = nodes**2 * np.exp(-0.5*(nodes/state.sigma_p)**2) * \
                f(q, nodes)
            return np.sum(weights*vals)

        def integrand(q):
            if q <= 0.0:
                return 0.0
            fine = _inner_panels(q, f.kinks, p_max, n_nodes)
            coarse = _inner_panels(q, f.kinks, p_max, n_nodes // 2)
            value = inner(q, *fine)
            weight = prefactor*q*q*np.exp(-0.5*(q/state.sigma_q)**2)
            inner_error[0] = max(inner_error[0],
                                 abs(weight*(value - inner(q, *coarse))))
            return weight*value

        value, error = quad_checked(integrand, 0.0, q_max, points, tol,
                                    limit)
        error += inner_error[0]*q_max
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to integrate {f.name} over '
              f'sigma_q={state.sigma_q}, sigma_p={state.sigma_p}.')
    return value, error


def expect_mc(observable, state, n_samples=10**6, seed=0, chunk=10**6):
    '''Monte Carlo oracle for expect: the state itself is the sampler, so
    the estimate is the sample mean of f. Output: (value, stderr).'''
    if n_samples < 1:
        raise DomainError(f'n_samples must be >= 1, got {n_samples}.')
    f = _as_observable(observable)
    rng = np.random.default_rng(seed)
    total, total_sq, done = 0.0, 0.0, 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        points = state.sample(rng, size)
        q = np.sqrt(np.sum(points[:, :3]**2, axis=1))
        p = np.sqrt(np.sum(points[:, 3:]**2, axis=1))
        vals = np.asarray(f(q, p), dtype=float)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals*vals))
        done += size
    mean = total/n_samples
    if n_samples == 1:
        return mean, 0.0
    var = max(0.0, total_sq/n_samples - mean*mean)
    return mean, float(np.sqrt(var/(n_samples - 1)))


def _scan_cell(args):
    sigma_q, sigma_p, n, tol = args
    try:
        value, error = expect(observable_g_h(n),
                              GaussianState(sigma_q, sigma_p), tol=tol)
    except ConvergenceError as err:
        return ScanCell(sigma_q, sigma_p, err.partial, err.error_estimate,
                        '?')
    if abs(value) <= error:
        sign = '0'
    else:
        sign = '+' if value > 0 else '-'
    return ScanCell(sigma_q, sigma_p, value, error, sign)


def positivity_scan(sigma_q_grid, sigma_p_grid, n=2, tol=1e-10, threads=4,
                    verbose=False):
    '''Sign map of <g_H(E_n), rho_G(sigma_q, sigma_p)> over a grid.

    Cells with |value| <= error are flagged with sign '0' (the boundary
    band between the regions), cells whose quadrature failed with '?'.
    Output: list of ScanCell ordered sigma_q major, sigma_p minor.
    '''
    sigma_q_grid = np.atleast_1d(np.asarray(sigma_q_grid, dtype=float))
    sigma_p_grid = np.atleast_1d(np.asarray(sigma_p_grid, dtype=float))
    if np.any(sigma_q_grid <= 0) or np.any(sigma_p_grid <= 0):
        raise DomainError('Scan grids must be positive.')
    t0 = perf_counter()
    jobs = [(float(sq), float(sp), n, tol) for sq in sigma_q_grid
            for sp in sigma_p_grid]
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        cells = list(pool.map(_scan_cell, jobs))
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to scan {len(cells)} cells.')
    return cells


def ground_overlap(sigma, n=2):
    '''<g_H(E_n), rho_gnd(sigma)> as the 1D radial integral
    int 4 pi q**2 t_h(n, -1/q) gauss_sigma(q) dq.'''
    value, _ = expect(observable_g_h(n), GaussianState(sigma, 0.0),
                      tol=1e-12)
    return value


def find_sigma_gnd(tol=1e-10, bracket=sigma_bracket):
    '''Width of rho_gnd at which <g_H(E_2)> changes sign, by bisection.'''
    if not tol > 0:
        raise DomainError(f'tol must be positive, got {tol}.')
    lo, hi = bracket
    f_lo, f_hi = ground_overlap(lo), ground_overlap(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NumericalError(
            f'<g_H(E_2)> has no sign change on [{lo}, {hi}] '
            f'({f_lo:.3e}, {f_hi:.3e}); check the unit system.')
    return optimize.bisect(ground_overlap, lo, hi, xtol=tol, rtol=4e-16,
                           maxiter=200)


def mean_energy(state):
    '''<H> of a delta-limit state in closed form: -sqrt(2/pi)/sigma.'''
    if not state.is_delta:
        return expect(observable_hamiltonian(), state)[0]
    return -np.sqrt(2.0/np.pi)/state.sigma_q


def most_probable_radius(state, grid_points=20001, atol=1e-6):
    '''argmax of q**2 exp(-q**2/(2 sigma**2)), i.e. sqrt(2) sigma, checked
    against a grid search refined by bounded minimization.'''
    if not state.is_delta:
        raise DomainError('most_probable_radius needs a sigma_p = 0 state.')
    sigma = state.sigma_q
    analytic = np.sqrt(2.0)*sigma

    def minus_radial(q):
        return -(q*q*np.exp(-0.5*(q/sigma)**2))
    grid = np.linspace(0.0, 6*sigma, grid_points)
    i = int(np.argmin(minus_radial(grid)))
    step = grid[1] - grid[0]
    best = optimize.minimize_scalar(
        minus_radial, bounds=(max(grid[i]-step, 0.0), grid[i]+step),
        method='bounded', options={'xatol': 1e-12})
    if abs(best.x - analytic) > atol:
        raise NumericalError(f'Grid search gives {best.x:.9f}, analytic '
                             f'value is {analytic:.9f}.')
    return float(analytic)


def energy_distribution(state, n_max=8, tol=1e-10):
    '''Energy probabilities P_n = <g_H(E_n), rho> for n = 1..n_max and
    their first moment sum_n E_n P_n.

    Output: (probs, errors, first_moment) with probs and errors as dicts
        keyed by n.
    '''
    probs, errors = {}, {}
    for n in range(1, n_max+1):
        probs[n], errors[n] = expect(observable_g_h(n), state, tol=tol)
    first_moment = sum(float(energy_level(n))*value
                       for n, value in probs.items())
    return probs, errors, first_moment


def ground(tol=1e-10):
    '''Ground-state summary: sigma_gnd, <H>/E_1 and the most probable
    radius sqrt(2) sigma_gnd.'''
    sigma = find_sigma_gnd(tol)
    state = ground_state(sigma)
    return GroundState(sigma, mean_energy(state)/float(energy_level(1)),
                       most_probable_radius(state))


def MODEL():

    from kamodo import Kamodo
    import kamodo_phasespace.models.model_utilities as MU

    class MODEL(Kamodo):
        '''Marginals of a Gaussian state and, optionally, a positivity scan
        as Kamodo functions.

        Inputs:
            sigma_q, sigma_p: state widths (sigma_p = 0 is the delta limit,
                which registers rho_q only).
            scan: list of ScanCell from positivity_scan on a full grid.
            variables_requested: names from model_varnames; empty means all.
            gridded_int: also register the gridded scan function.
            verbose: print timing information.
        '''
        def __init__(self, sigma_q=ground_sigma, sigma_p=0.0, scan=None,
                     variables_requested=[], gridded_int=True,
                     verbose=False, **kwargs):
            super(MODEL, self).__init__(**kwargs)
            self.modelname = 'states'
            self.state = GaussianState(sigma_q, sigma_p)
            t0 = perf_counter()
            requested = MU.check_requested(variables_requested,
                                           model_varnames)

            if 'rho_q' in requested:
                MU.register_function(self, 'rho_q',
                                     self.state.position_marginal, '',
                                     {'q': ''})
            if 'rho_p' in requested and not self.state.is_delta:
                MU.register_function(self, 'rho_p',
                                     self.state.momentum_marginal, '',
                                     {'p': ''})
            if 'gH2_scan' in requested and scan:
                sq = np.unique([cell.sigma_q for cell in scan])
                sp = np.unique([cell.sigma_p for cell in scan])
                values = np.array([cell.value for cell in scan],
                                  dtype=float).reshape(sq.size, sp.size)
                MU.Functionalize_Dataset(
                    self, {'sigma_q': {'units': '', 'data': sq},
                           'sigma_p': {'units': '', 'data': sp}},
                    'gH2_scan', {'units': '', 'data': values}, gridded_int,
                    'width')
            if verbose:
                print(f'Took {perf_counter()-t0:.5f}s to register the state '
                      'functions.')

    return MODEL

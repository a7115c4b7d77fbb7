# -*- coding: utf-8 -*-
"""
Coulomb scattering: classical trajectory Monte Carlo against the Rutherford
cross section, and the far-field exponent ledger of the perturbation orders
rho_{n,k} (n counts hbar**2 corrections, k the order in the potential).

Trajectories run in the scattering plane from a sphere of radius R back to
the same sphere. The deflection angle comes from the integrated exit
momentum, with the bending left outside R added from the energy and the
angular momentum alone.
"""
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from time import perf_counter
import warnings

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from kamodo_phasespace.algebra.phase_expr import PhaseExpr
from kamodo_phasespace.errors import DomainError, NumericalError, \
    PhaseSpaceError

# variable name: [kamodo name, description, index, coordinate system,
#                 coordinate type, [coordinates], display units]
model_varnames = {'theta': ['theta', 'Deflection angle theta(b)', 0,
                            'internal', 'impact', ['b'], 'rad'],
                  'dsigma': ['dsigma', 'Rutherford cross section '
                             'dsigma/dOmega', 0, 'internal', 'angle',
                             ['theta'], 'a0^2/sr']}

TrajectoryInfo = namedtuple('TrajectoryInfo', ['theta', 'energy_drift',
                                               'steps', 'r_min'])
BinResult = namedtuple('BinResult', ['theta_mid', 'estimate', 'stderr',
                                     'rutherford_formula', 'ratio', 'count'])
ScatterResult = namedtuple('ScatterResult', ['bins', 'chi2', 'dof', 'seed',
                                             'interp_error'])

far_field_verdict = 'Rutherford, classical'


@dataclass(frozen=True)
class ScatterConfig:
    '''Beam of uniform areal density nu = n_particles/(pi b_max**2) with
    momentum p0 along e1. Bin edges are in degrees. With stratified set,
    b**2 is drawn once per equal-area ring of the disk. n_check sampled
    particles are integrated directly against the interpolated table.'''
    p0: float = 1.0
    b_max: float = 5.0
    n_particles: int = 10**6
    bin_edges: tuple = tuple(range(30, 151, 10))
    seed: int = 0
    kappa: float = 1.0
    mu: float = 1.0
    repulsive: bool = False
    n_table: int = 400
    chi2_range: tuple = (30.0, 150.0)
    stratified: bool = True
    n_check: int = 200

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        if np.any(edges <= 0) or np.any(edges >= 180) or \
                np.any(np.diff(edges) <= 0):
            raise DomainError('Bin edges must increase strictly inside '
                              '(0, 180) degrees.')
        if not (self.p0 > 0 and self.b_max > 0):
            raise DomainError('p0 and b_max must be positive.')
        if self.n_particles < 1:
            raise DomainError('n_particles must be >= 1.')
        if self.n_check < 0:
            raise DomainError('n_check must be >= 0.')

    @property
    def density(self):
        return self.n_particles/(np.pi*self.b_max**2)

    @property
    def length_scale(self):
        '''kappa mu/p0**2, the impact parameter of 90 degree scattering.'''
        return self.kappa*self.mu/self.p0**2


def rutherford_impact(theta, p0=1.0, kappa=1.0, mu=1.0):
    '''b(theta) = (kappa mu/p0**2) cot(theta/2).'''
    return kappa*mu/p0**2/np.tan(0.5*np.asarray(theta, dtype=float))


def rutherford(theta, p0=1.0, kappa=1.0, mu=1.0):
    '''dsigma/dOmega = (kappa mu/(2 p0**2))**2 / sin(theta/2)**4.'''
    return (kappa*mu/(2*p0**2))**2/np.sin(0.5*np.asarray(theta,
                                                         dtype=float))**4


def _equations(kappa, mu):
    def f(t, y):
        q, p = y[:2], y[2:]
        r = np.hypot(q[0], q[1])
        return np.concatenate([p/mu, -kappa*q/r**3])
    return f


def _asymptote(y, E, L, kappa, mu, outgoing):
    '''Direction of the asymptotic momentum reached from state y.

    The momentum angle alpha of y is corrected by the rotation left between
    radius r and infinity on an orbit with energy E and angular momentum L:
    the polar angle still turns by
        tail = sign(L) [asin((2 L**2/r - B)/D) - asin(-B/D)],
    B = 2 mu kappa, D = sqrt(B**2 + 8 mu E L**2), and the momentum makes the
    angle beta = atan(L/(r |p_r|)) with the radial direction.
    '''
    q, p = y[:2], y[2:]
    r = np.hypot(q[0], q[1])
    alpha = np.arctan2(p[1], p[0])
    B = 2*mu*kappa
    D = np.sqrt(B*B + 8*mu*E*L*L)
    tail = np.sign(L)*(np.arcsin(np.clip((2*L*L/r - B)/D, -1.0, 1.0)) -
                       np.arcsin(np.clip(-B/D, -1.0, 1.0)))
    beta = np.arctan2(L/r, abs(np.dot(q, p))/r)
    if outgoing:
        return alpha - beta + tail
    return alpha + beta - tail


def trajectory_angle(b, p0=1.0, kappa=1.0, mu=1.0, repulsive=False,
                     rtol=1e-12, return_info=False):
    '''Deflection angle theta in [0, pi] of a particle with impact
    parameter b and incoming momentum p0.

    The start point lies at distance R = 200 max(b, kappa mu/p0**2) with
    momentum along e1 and the exact energy p0**2/(2 mu) and angular
    momentum -b p0 of the asymptotic orbit. The run stops when the particle
    leaves the same sphere; theta is the angle between the incoming
    asymptote and the exit momentum carried on to infinity by _asymptote.
    '''
    if not (b > 0 and p0 > 0):
        raise DomainError(f'Need b > 0 and p0 > 0, got b={b}, p0={p0}.')
    k = -kappa if repulsive else kappa
    R = 200*max(b, abs(kappa)*mu/p0**2)
    P2 = p0**2 + 2*mu*k/R
    if P2 <= 0:
        raise DomainError('The start sphere lies inside the classically '
                          'forbidden region.')
    P = np.sqrt(P2)
    y0 = b*p0/P
    start = np.array([-np.sqrt(R*R - y0*y0), y0, P, 0.0])
    E0, L0 = 0.5*p0**2/mu, -b*p0

    def leave(t, y):
        return np.hypot(y[0], y[1]) - R
    leave.terminal, leave.direction = True, 1

    t_max = 4*R*mu/p0 + 100.0
    sol = solve_ivp(_equations(k, mu), (0.0, t_max), start, method='DOP853',
                    rtol=rtol, atol=rtol*R*1e-3, events=leave)
    if sol.status != 1:
        raise NumericalError(f'Trajectory with b={b} did not leave the '
                             f'interaction region: {sol.message}')
    end = sol.y_events[0][0]
    turn = _asymptote(end, E0, L0, k, mu, True) - \
        _asymptote(start, E0, L0, k, mu, False)
    theta = float(abs(np.angle(np.exp(1j*turn))))
    if not return_info:
        return theta

    def energy(y):
        return 0.5*np.dot(y[2:], y[2:])/mu - k/np.hypot(y[0], y[1])
    r = np.hypot(sol.y[0], sol.y[1])
    return TrajectoryInfo(theta, abs(energy(end) - E0)/E0, sol.t.size,
                          float(r.min()))


def deflection_table(config, threads=4, verbose=False):
    '''theta(b) on log-spaced b from the radius scattering past the last
    bin edge up to b_max. Output: (b, theta) arrays, theta decreasing.'''
    t0 = perf_counter()
    theta_last = np.deg2rad(max(config.bin_edges))
    b_min = 0.5*float(rutherford_impact(theta_last, config.p0, config.kappa,
                                        config.mu))
    b = np.geomspace(min(b_min, config.b_max/10), config.b_max,
                     config.n_table)

    def angle(value):
        return trajectory_angle(value, config.p0, config.kappa, config.mu,
                                config.repulsive)
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        theta = np.array(list(pool.map(angle, b)))
    if np.any(np.diff(theta) >= 0):
        raise NumericalError('theta(b) is not strictly decreasing on the '
                             'tabulation grid.')
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to integrate {b.size} '
              'trajectories.')
    return b, theta


def cross_section(config, threads=4, table=None, verbose=False):
    '''Monte Carlo dsigma/dOmega per angle bin.

    Impact parameters are drawn with b**2 uniform on the beam disk, mapped
    to angles through the PCHIP interpolant of the deflection table, and
    counted per bin. estimate = count/(nu dOmega) with the Poisson bound
    sqrt(count)/(nu dOmega) as stderr; the Rutherford column is the bin
    average pi (b_lo**2 - b_hi**2)/dOmega of the closed-form cross section.
    interp_error is the largest difference between the interpolant and a
    direct integration of config.n_check sampled particles.
    Output: ScatterResult(bins, chi2, dof, seed, interp_error).
    '''
    b_tab, theta_tab = table if table is not None else \
        deflection_table(config, threads, verbose)
    if theta_tab[-1] >= np.deg2rad(min(config.bin_edges)):
        raise DomainError(f'theta(b_max) = {np.rad2deg(theta_tab[-1]):.2f} '
                          'degrees lies inside the first bin; increase '
                          'b_max.')
    interp = PchipInterpolator(np.log(b_tab), theta_tab)

    rng = np.random.default_rng(config.seed)
    u = rng.random(config.n_particles)
    if config.stratified:
        u = (np.arange(config.n_particles) + u)/config.n_particles
    b = config.b_max*np.sqrt(u)
    theta = np.full(b.shape, np.pi)
    inside = b >= b_tab[0]
    theta[inside] = interp(np.log(b[inside]))

    interp_error = 0.0
    candidates = np.flatnonzero(inside)
    if config.n_check and candidates.size:
        pick = rng.choice(candidates, min(config.n_check, candidates.size),
                          replace=False)

        def angle(value):
            return trajectory_angle(value, config.p0, config.kappa,
                                    config.mu, config.repulsive)
        with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
            direct = np.array(list(pool.map(angle, b[pick])))
        interp_error = float(np.max(np.abs(direct - theta[pick])))
        if verbose:
            print(f'Direct integration of {pick.size} sampled particles '
                  f'differs from the table by at most {interp_error:.3g} rad.')

    edges = np.deg2rad(np.asarray(config.bin_edges, dtype=float))
    counts, _ = np.histogram(theta, bins=edges)
    d_omega = 2*np.pi*(np.cos(edges[:-1]) - np.cos(edges[1:]))
    nu = config.density
    b_edges = rutherford_impact(edges, config.p0, config.kappa, config.mu)
    formula = np.pi*(b_edges[:-1]**2 - b_edges[1:]**2)/d_omega

    bins, chi2, dof = [], 0.0, 0
    lo, hi = np.deg2rad(config.chi2_range)
    for i, count in enumerate(counts):
        mid = 0.5*(edges[i] + edges[i+1])
        estimate = count/(nu*d_omega[i])
        stderr = np.sqrt(count)/(nu*d_omega[i])
        bins.append(BinResult(float(np.rad2deg(mid)), float(estimate),
                              float(stderr), float(formula[i]),
                              float(estimate/formula[i]), int(count)))
        if count == 0:
            warnings.warn(f'Empty bin at {np.rad2deg(mid):.1f} degrees; '
                          'increase n_particles.')
        elif lo <= mid <= hi:
            chi2 += ((estimate - formula[i])/stderr)**2
            dof += 1
    return ScatterResult(bins, float(chi2), dof, config.seed, interp_error)


@dataclass
class ExponentLedger:
    '''Decay exponents alpha(n, k) of rho_{n,k} ~ |q|**-alpha for
    0 <= n, k <= N. rho_{n,0} vanishes identically for n >= 1.'''
    N: int
    alpha: dict = field(default_factory=dict)
    vanishing: set = field(default_factory=set)

    def survivors_raw(self):
        '''Orders whose |q|**2 weighted contribution does not vanish at
        infinity: alpha(n, k) <= 2.'''
        return sorted(key for key, value in self.alpha.items()
                      if value - 2 <= 0)

    def survivors(self):
        return [key for key in self.survivors_raw()
                if key not in self.vanishing]

    def verdict(self):
        if any(n >= 1 for n, _ in self.survivors()):
            return 'non-classical far field'
        return far_field_verdict


def exponent_table(N=20):
    '''Build alpha by the recursion alpha(n, k) = 2(n - m) + 1 +
    alpha(m, k - 1) over every branch m = 0..n with non-vanishing
    rho_{m,k-1}, checking that all branches agree.'''
    if N < 2:
        raise DomainError(f'exponent_table needs N >= 2, got {N}.')
    ledger = ExponentLedger(N)
    ledger.alpha[(0, 0)] = 0
    for n in range(1, N+1):
        ledger.alpha[(n, 0)] = 2*n
        ledger.vanishing.add((n, 0))
    for k in range(1, N+1):
        for n in range(N+1):
            branches = {2*(n - m) + 1 + ledger.alpha[(m, k-1)]
                        for m in range(n+1) if (m, k-1) not in
                        ledger.vanishing}
            if len(branches) != 1:
                raise PhaseSpaceError(f'alpha({n}, {k}) depends on the '
                                      f'branch: {sorted(branches)}.')
            ledger.alpha[(n, k)] = branches.pop()
    return ledger


def classical_verdict(N=20):
    '''Far-field verdict of the ledger up to order N. The surviving orders
    never carry an hbar correction, so the verdict holds for every choice
    of bracket coefficients a_n.'''
    return exponent_table(N).verdict()


def radial_degree(expr):
    '''Set of homogeneity degrees of the terms of a PhaseExpr in q.'''
    expr = expr.canonical()
    return {s + sum(exps[:3]) - 2*expr.qpow for _, s, exps, _ in
            expr.terms()}


def kernel_homogeneity_check(order):
    '''Apply every order-th partial derivative in q to 1/r and check that
    each result is homogeneous of degree -1 - order.
    Output: {index tuple: degree}.'''
    if order < 1:
        raise DomainError(f'order must be >= 1, got {order}.')
    inv_r = PhaseExpr.radial(-1)
    out = {}
    for index in combinations_with_replacement((1, 2, 3), order):
        expr = inv_r
        for i in index:
            expr = expr.diff(f'q{i}')
        degrees = radial_degree(expr)
        if degrees != {-1 - order}:
            raise PhaseSpaceError(f'd/dq{index} (1/r) has degrees '
                                  f'{sorted(degrees)}, expected '
                                  f'{-1 - order}.')
        out[index] = -1 - order
    return out


def MODEL():

    from kamodo import Kamodo
    import kamodo_phasespace.models.model_utilities as MU

    class MODEL(Kamodo):
        '''Deflection function and Rutherford cross section as Kamodo
        functions.

        Inputs:
            config: ScatterConfig fixing p0, kappa, mu and the b range.
            table: optional (b, theta) from deflection_table; computed when
                missing.
            variables_requested: names from model_varnames; empty means all.
            verbose: print timing information.
        '''
        def __init__(self, config=None, table=None, variables_requested=[],
                     verbose=False, **kwargs):
            super(MODEL, self).__init__(**kwargs)
            self.modelname = 'scattering'
            self.config = config or ScatterConfig()
            t0 = perf_counter()
            requested = MU.check_requested(variables_requested,
                                           model_varnames)
            if 'theta' in requested:
                b, theta = table if table is not None else \
                    deflection_table(self.config, verbose=verbose)
                MU.Functionalize_Dataset(
                    self, {'b': {'units': '', 'data': b}}, 'theta',
                    {'units': '', 'data': theta}, False, '')
            if 'dsigma' in requested:
                cfg = self.config
                MU.register_function(
                    self, 'dsigma',
                    lambda theta: rutherford(theta, cfg.p0, cfg.kappa,
                                             cfg.mu), '', {'theta': ''})
            if verbose:
                print(f'Took {perf_counter()-t0:.5f}s to register the '
                      'scattering functions.')

    return MODEL

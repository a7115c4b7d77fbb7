# -*- coding: utf-8 -*-
"""
Hydrogen in a resonant oscillating electric field along e3.

In the interaction picture the effective generator H_e + t G is linear in
q and p, so the ground-state measure is transported rigidly:

    s(t) = (2 eE/(mu omega**2)) (sin wt - wt cos wt)
    u(t) = (2 eE/omega) (cos wt - 1)

and the probability of level n is the overlap of the shifted Gaussian with
T_n^H(|u|**2/2 - 1/|q|). The quantum curve uses the 1s, 2s and 2p0
eigenfunctions displaced by the same (s, u).
"""
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from kamodo_phasespace.algebra.bracket import BracketSpec, gmb
from kamodo_phasespace.algebra.hamiltonians import drive_generator, \
    electric_hamiltonian, hydrogen_hamiltonian
from kamodo_phasespace.algebra.phase_expr import PhaseExpr
from kamodo_phasespace.errors import DomainError, PhaseSpaceError
from kamodo_phasespace.models.spectral import energy_level, t_h
from kamodo_phasespace.models.states import quad_checked, ground_sigma

# variable name: [kamodo name, description, index, coordinate system,
#                 coordinate type, [coordinates], display units]
model_varnames = {'s': ['s', 'Position shift along e3', 0, 'internal',
                        'time', ['t'], 'a0'],
                  'u': ['u', 'Momentum shift along e3', 0, 'internal',
                        'time', ['t'], 'hbar/a0'],
                  'pr_E1': ['pr_E1', 'Pr[H(t) = E_1]', 0, 'internal',
                            'time', ['t'], ''],
                  'pr_E2': ['pr_E2', 'Pr[H(t) = E_2]', 0, 'internal',
                            'time', ['t'], '']}

test_monomials = ('q3', 'p3', 'q1*p3', 'q3^2*p3', 'q1*q3*p2')
ExcitationRow = namedtuple('ExcitationRow', ['t', 'pr_E1', 'pr_E2',
                                             'pr_qt_E1', 'pr_qt_E2'])


@dataclass(frozen=True)
class DriveSpec:
    '''Resonant drive omega = E_2 - E_1 = 3/8 with eE = mu a0 omega**2.'''
    omega: float = float(energy_level(2) - energy_level(1))
    eE: float = None
    mu: float = 1.0
    sigma: float = ground_sigma
    t_max: float = 3.0/abs(float(energy_level(1)))
    n_samples: int = 200

    def __post_init__(self):
        if self.eE is None:
            object.__setattr__(self, 'eE', self.mu*self.omega**2)
        if not self.omega > 0:
            raise DomainError('omega must be positive.')

    def times(self):
        return np.linspace(0.0, self.t_max, self.n_samples)

    def shift(self, t):
        '''(s(t), u(t)) along e3, vectorized over t >= 0.'''
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError('The drive starts at t = 0.')
        wt = self.omega*t
        s = 2*self.eE/(self.mu*self.omega**2)*(np.sin(wt) - wt*np.cos(wt))
        u = 2*self.eE/self.omega*(np.cos(wt) - 1.0)
        if s.ndim == 0:
            return float(s), float(u)
        return s, u

    def max_momentum_shift(self):
        return 4*self.eE/self.omega


def shift(t, drive=None):
    return (drive or DriveSpec()).shift(t)


def commutator_G(spec=None, eE=None, monomials=test_monomials, mu=None):
    '''G with L_{H_e} L_H - L_H L_{H_e} = L_G, checked on test monomials.

    Inputs:
        spec: BracketSpec (Poisson by default; H_e is linear so the identity
            holds for every bracket of the family).
        eE: optional value substituted for the field amplitude.
        monomials: test functions the operator identity is checked on.
    Output: G = -(2 eE/mu) sin(omega t) p3 as a PhaseExpr.
    '''
    spec = spec or BracketSpec.poisson()
    H = hydrogen_hamiltonian(mu)
    H_e = electric_hamiltonian()
    G = drive_generator(mu)
    if eE is not None:
        H_e, G = H_e.subs({'eE': eE}), G.subs({'eE': eE})
    for text in monomials:
        f = PhaseExpr.parse(text)
        lhs = gmb(H_e, gmb(H, f, spec), spec) - gmb(H, gmb(H_e, f, spec),
                                                     spec)
        if not (lhs - gmb(G, f, spec)).is_zero():
            raise PhaseSpaceError(f'L_He L_H - L_H L_He differs from L_G on '
                                  f'{text}: {(lhs - gmb(G, f, spec))}.')
    return G.canonical()


def _shell_kernel(r, s, sigma):
    '''Angular integral of the 3D Gaussian over the sphere |q| = r when the
    Gaussian is centred a distance s away.'''
    norm = (2*np.pi)**-1.5*sigma**-3
    x = r*abs(s)/sigma**2
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(x > 1e-12, -np.expm1(-2*x)/np.where(x > 0, x, 1.0),
                         2.0)
    return 2*np.pi*norm*np.exp(-0.5*((r - abs(s))/sigma)**2)*ratio


def prob_level(t, n, drive=None, tol=1e-11):
    '''Pr[H(t) = E_n] for the transported ground-state measure.

    Integrates r**2 T_n^H(u**2/2 - 1/r) times the shell kernel over r, with
    panels split at the radii where u**2/2 - 1/r hits a kink of T_n^H.
    '''
    drive = drive or DriveSpec()
    if n < 1:
        raise DomainError(f'Level index must be >= 1, got {n}.')
    s, u = drive.shift(t)
    kinetic = 0.5*u*u
    kinks = [float(energy_level(k)) for k in (n-1, n, n+1) if k >= 1]
    r_max = abs(s) + 12*drive.sigma
    points = sorted(1.0/(kinetic - E) for E in kinks
                    if kinetic - E > 0 and 1.0/(kinetic - E) < r_max)
    if 0 < abs(s) < r_max:
        points = sorted(points + [abs(s)])

    def integrand(r):
        if r <= 0.0:
            return 0.0
        return r*r*_shell_kernel(r, s, drive.sigma) * \
            t_h(n, kinetic - 1.0/r, strict=False)
    value, _ = quad_checked(integrand, 0.0, r_max, points, tol, 400)
    return value


def prob_level_mc(t, n, drive=None, n_samples=10**6, seed=0):
    '''Monte Carlo oracle for prob_level. Output: (value, stderr).'''
    drive = drive or DriveSpec()
    s, u = drive.shift(t)
    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, drive.sigma, (n_samples, 3))
    y[:, 2] -= s
    r = np.sqrt(np.sum(y*y, axis=1))
    vals = t_h(n, 0.5*u*u - 1.0/r, strict=False)
    return float(np.mean(vals)), float(np.std(vals, ddof=1)/np.sqrt(n_samples))


def psi_100(r, c):
    return np.exp(-r)/np.sqrt(np.pi)


def psi_200(r, c):
    return (2.0 - r)*np.exp(-0.5*r)/(4*np.sqrt(2*np.pi))


def psi_210(r, c):
    return r*c*np.exp(-0.5*r)/(4*np.sqrt(2*np.pi))


eigenfunctions = {1: (psi_100,), 2: (psi_200, psi_210)}


def _overlap_grid(s, n_r=48, n_c=32, r_span=45.0):
    '''Tensor Gauss-Legendre nodes in (r, cos theta) with weights
    2 pi r**2 dr dc, r panels split at the cusp radius |s|.'''
    x_r, w_r = np.polynomial.legendre.leggauss(n_r)
    x_c, w_c = np.polynomial.legendre.leggauss(n_c)
    r_edges = np.arange(0.0, r_span + abs(s) + 1e-9, 3.0)
    if abs(s) > 0:
        r_edges = np.unique(np.append(r_edges, abs(s)))
    c_edges = np.array([-1.0, -0.9, -0.5, 0.0, 0.5, 0.9, 1.0])

    def panels(edges, x, w):
        half = 0.5*np.diff(edges)
        mid = 0.5*(edges[1:] + edges[:-1])
        return ((mid[:, None] + half[:, None]*x).ravel(),
                (half[:, None]*w).ravel())
    r, wr = panels(r_edges, x_r, w_r)
    c, wc = panels(c_edges, x_c, w_c)
    R, C = np.meshgrid(r, c, indexing='ij')
    return R, C, 2*np.pi*R*R*np.outer(wr, wc)


def overlap(psi, s, u, **grid_kwargs):
    '''<psi | exp(-i x.u) | psi_100(. + s e3)> as a complex number.'''
    R, C, W = _overlap_grid(s, **grid_kwargs)
    shifted = np.sqrt(np.maximum(R*R + s*s + 2*R*s*C, 0.0))
    base = psi(R, C)*psi_100(shifted, None)*W
    phase = u*R*C
    return complex(np.sum(base*np.cos(phase)), -np.sum(base*np.sin(phase)))


def prob_level_qt(t, n, drive=None):
    '''Quantum probability of level n in {1, 2}: sum over the m = 0
    eigenfunctions of |overlap|**2.'''
    if n not in eigenfunctions:
        raise DomainError(f'Level {n} not available. Pick from '
                          f'{list(eigenfunctions)}.')
    s, u = (drive or DriveSpec()).shift(t)
    return float(sum(abs(overlap(psi, s, u))**2 for psi in eigenfunctions[n]))


def overlap_mc(psi, s, u, n_samples=10**6, seed=0):
    '''Importance-sampled overlap with x ~ |psi_100|**2 (r ~ Gamma(3, 1/2),
    isotropic direction). Output: (|overlap|**2, stderr).'''
    rng = np.random.default_rng(seed)
    r = rng.gamma(3.0, 0.5, n_samples)
    c = rng.uniform(-1.0, 1.0, n_samples)
    shifted = np.sqrt(np.maximum(r*r + s*s + 2*r*s*c, 0.0))
    ratio = psi(r, c)*psi_100(shifted, None)/psi_100(r, None)
    z = ratio*np.exp(-1j*u*r*c)
    mean = np.mean(z)
    stderr = np.std(z, ddof=1)/np.sqrt(n_samples)
    return float(abs(mean)**2), float(2*abs(mean)*stderr)


def _row(args):
    t, drive = args
    return ExcitationRow(float(t), prob_level(t, 1, drive),
                         prob_level(t, 2, drive), prob_level_qt(t, 1, drive),
                         prob_level_qt(t, 2, drive))


def excitation_curve(drive=None, times=None, threads=4, verbose=False):
    '''ExcitationRow per sample time, in time order.'''
    drive = drive or DriveSpec()
    times = drive.times() if times is None else np.asarray(times,
                                                            dtype=float)
    t0 = perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        rows = list(pool.map(_row, [(t, drive) for t in times]))
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to compute {len(rows)} '
              'excitation samples.')
    return rows


def agreement(rows):
    '''max_t |Pr[E_1] - Pr_QT[E_1]| over an excitation curve.'''
    return max(abs(row.pr_E1 - row.pr_qt_E1) for row in rows)


def MODEL():

    from kamodo import Kamodo
    import kamodo_phasespace.models.model_utilities as MU

    class MODEL(Kamodo):
        '''Drive shifts and level probabilities as Kamodo functions of t.

        Inputs:
            drive: DriveSpec (resonant default).
            variables_requested: names from model_varnames; empty means all.
            verbose: print timing information.
        '''
        def __init__(self, drive=None, variables_requested=[], verbose=False,
                     **kwargs):
            super(MODEL, self).__init__(**kwargs)
            self.modelname = 'field'
            self.drive = drive or DriveSpec()
            t0 = perf_counter()
            requested = MU.check_requested(variables_requested,
                                           model_varnames)
            if 's' in requested:
                MU.register_function(self, 's', lambda t: np.asarray(
                    self.drive.shift(t)[0]), '', {'t': ''})
            if 'u' in requested:
                MU.register_function(self, 'u', lambda t: np.asarray(
                    self.drive.shift(t)[1]), '', {'t': ''})
            for n in (1, 2):
                if f'pr_E{n}' in requested:
                    def pr(t, n=n):
                        return np.vectorize(
                            lambda x: prob_level(x, n, self.drive))(t)
                    MU.register_function(self, f'pr_E{n}', pr, '',
                                         {'t': ''})
            if verbose:
                print(f'Took {perf_counter()-t0:.5f}s to register the drive '
                      'functions.')

    return MODEL

# -*- coding: utf-8 -*-
"""
Sawtooth spectral families of the toy hydrogen atom.

Internal units hbar = mu = kappa = 1, so a0 = 1 and E_n = -1/(2 n**2).
T_n^H are the piecewise linear partition-of-unity bumps on the energy ladder
(T_1 continues linearly to -inf, T_2 goes negative below E_1), T_m^L the
triangles of width 2 hbar centred on m hbar.
"""
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from kamodo_phasespace.errors import DomainError

# variable name: [kamodo name, description, index, coordinate system,
#                 coordinate type, [coordinates], display units]
model_varnames = {'T_H': ['TH', 'Energy sawtooth T_n^H(x)', 0, 'internal',
                          'energy', ['x'], 'E_h'],
                  'T_L': ['TL', 'Angular momentum sawtooth T_m^L(x)', 0,
                          'internal', 'angular', ['x'], 'hbar'],
                  'g_H': ['gH', 'Energy spectral measure g_H(E_n; q, p)', 0,
                          'internal', 'phase', ['q', 'p'], ''],
                  'g_HB': ['gHB', 'Zeeman product measure', 0, 'internal',
                           'phase', ['q', 'p'], '']}

TAIL = (0, 1)  # locate_interval sentinel for x below E_1
mu_B = 0.5  # Bohr magneton e hbar/(2 mu) in internal units

ZeemanSupport = namedtuple('ZeemanSupport',
                           ['stated_bound', 'observed_max', 'search_max'])


def energy_level(n):
    '''E_n = -1/(2 n**2), vectorized over n.'''
    n = np.asarray(n, dtype=float)
    return -0.5/(n*n)


@dataclass(frozen=True)
class EnergyLadder:
    '''Hydrogen levels E_n = -kappa/(2 a0 n**2). With the default internal
    units a0 = kappa = 1.'''
    kappa: float = 1.0
    a0: float = 1.0
    units: str = 'internal'

    def level(self, n):
        return self.kappa/self.a0 * energy_level(n)

    def locate(self, x):
        return locate_interval(x*self.a0/self.kappa)


def _check_energy(x):
    x = np.asarray(x, dtype=float)
    if np.any(x >= 0.0):
        raise DomainError('Energies x >= 0 lie in the continuum; the '
                          'spectral measure covers bound states only.')
    return x


def _locate(x):
    '''Vectorized n with x in [E_n, E_{n+1}); 0 below E_1.'''
    with np.errstate(divide='ignore', invalid='ignore'):
        n = np.floor(1.0/np.sqrt(-2.0*x))
    n = np.where(np.isfinite(n), n, 0.0).astype(np.int64)
    # float guard on the closed form
    n = np.where((n >= 1) & (x < energy_level(np.maximum(n, 1))), n-1, n)
    n = np.where(x >= energy_level(n+1), n+1, n)
    return np.where(x < -0.5, 0, n)


def locate_interval(x, ladder=None):
    '''Consecutive level indices (n, n+1) with x in [E_n, E_{n+1}), or the
    TAIL sentinel for x < E_1. Half-open, so x = E_n returns (n, n+1).'''
    if ladder is not None:
        return ladder.locate(x)
    x = float(_check_energy(x))
    n = int(_locate(np.array(x)))
    if n == 0:
        return TAIL
    return (n, n+1)


def t_h(n, x, strict=True):
    '''Energy sawtooth T_n^H(x), vectorized over x.

    Inputs:
        n: level index >= 1.
        x: energy or array of energies in internal units.
        strict: if True, x >= 0 raises DomainError. With strict=False the
            bound-state formula is evaluated anyway, which is 0 there.
    '''
    if n < 1:
        raise DomainError(f'Level index must be >= 1, got {n}.')
    x = _check_energy(x) if strict else np.asarray(x, dtype=float)
    E = energy_level
    if n == 1:
        out = np.where(x <= E(2), (E(2) - x)/(E(2) - E(1)), 0.0)
    elif n == 2:
        out = np.where(x <= E(2), (x - E(1))/(E(2) - E(1)),
                       np.where(x <= E(3), (E(3) - x)/(E(3) - E(2)), 0.0))
    else:
        lo, mid, hi = E(n-1), E(n), E(n+1)
        out = np.where((x >= lo) & (x <= mid), (x - lo)/(mid - lo),
                       np.where((x > mid) & (x <= hi), (hi - x)/(hi - mid),
                                0.0))
    return out if out.ndim else float(out)


def energy_decomposition(x):
    '''The at most two active members at each x: (n_lo, n_hi, T_lo, T_hi)
    with n_hi = n_lo + 1. Below E_1 the pair is (1, 2).'''
    x = _check_energy(x)
    n = np.maximum(_locate(x), 1)
    E_lo, E_hi = energy_level(n), energy_level(n+1)
    width = E_hi - E_lo
    return n, n+1, (E_hi - x)/width, (x - E_lo)/width


def t_l(m, x, hbar=1.0):
    '''Angular momentum sawtooth T_m^L(x) = max(0, 1 - |x/hbar - m|).'''
    x = np.asarray(x, dtype=float)
    out = np.maximum(0.0, 1.0 - np.abs(x/hbar - m))
    return out if out.ndim else float(out)


def angular_decomposition(x, hbar=1.0):
    '''(m, m+1, T_m, T_{m+1}) with m = floor(x/hbar).'''
    y = np.asarray(x, dtype=float)/hbar
    m = np.floor(y)
    u = y - m
    return m.astype(np.int64), m.astype(np.int64)+1, 1.0 - u, u


def partition_residuals(x):
    '''Check the energy family on an array of negative energies with the
    member functions themselves, one group of x per active pair.

    Output: (max |sum_n T_n^H(x) - 1|, max |sum_n E_n T_n^H(x) - x|,
        max |T_n^H(x)| over the neighbours n_lo-1 and n_hi+1).
    '''
    x = _check_energy(x)
    n_lo = np.maximum(_locate(x), 1)
    total, moment = np.empty_like(x), np.empty_like(x)
    spill = 0.0
    for n in np.unique(n_lo):
        sel = n_lo == n
        lo, hi = t_h(int(n), x[sel]), t_h(int(n)+1, x[sel])
        total[sel] = lo + hi
        moment[sel] = energy_level(n)*lo + energy_level(n+1)*hi
        outer = [t_h(int(n)+2, x[sel])]
        if n > 1:
            outer.append(t_h(int(n)-1, x[sel]))
        spill = max(spill, *(float(np.max(np.abs(v))) for v in outer))
    return (float(np.max(np.abs(total - 1.0))),
            float(np.max(np.abs(moment - x))), spill)


def angular_partition_residuals(x, hbar=1.0):
    '''Output: (max |sum_m T_m^L(x) - 1|, max |sum_m m hbar T_m^L(x) - x|)
    over the two active members of every x.'''
    x = np.asarray(x, dtype=float)
    m = np.floor(x/hbar).astype(np.int64)
    total, moment = np.zeros_like(x), np.zeros_like(x)
    for k in (0, 1):
        values = np.maximum(0.0, 1.0 - np.abs(x/hbar - (m+k)))
        total += values
        moment += (m+k)*hbar*values
    return (float(np.max(np.abs(total - 1.0))),
            float(np.max(np.abs(moment - x))))


def _split_points(point):
    point = np.asarray(point, dtype=float)
    if point.shape[-1] != 6:
        raise DomainError('Phase-space points need six coordinates '
                          '(q1, q2, q3, p1, p2, p3).')
    q, p = point[..., :3], point[..., 3:]
    r = np.sqrt(np.sum(q*q, axis=-1))
    if np.any(r == 0.0):
        raise DomainError('|q| = 0 is a singular point of H = p^2/2 - 1/|q|.')
    return q, p, r


def hamiltonian(point):
    '''H = |p|^2/2 - 1/|q| at one point or an array of points (..., 6).'''
    q, p, r = _split_points(point)
    return 0.5*np.sum(p*p, axis=-1) - 1.0/r


def angular_momentum_3(point):
    point = np.asarray(point, dtype=float)
    return point[..., 0]*point[..., 4] - point[..., 1]*point[..., 3]


def g_h(n, point):
    '''Energy spectral measure g_H(E_n; q, p) = T_n^H(H(q, p)).'''
    out = t_h(n, hamiltonian(point), strict=False)
    return out


def g_hb(n, m, point, B, hbar=1.0):
    '''Zeeman product measure T_n^H(H) T_m^L(L3) and the shifted level
    E_n + mu_B B m.'''
    value = t_h(n, hamiltonian(point), strict=False) * \
        t_l(m, angular_momentum_3(point), hbar)
    return value, float(energy_level(n)) + mu_B*B*m


def is_valid_point_state(point):
    '''A phase-space delta at point gives nonnegative, normalized energy
    probabilities iff E_1 <= H(point) < 0. Points below E_1 make
    <g_H(E_2)> negative, points with H >= 0 carry no bound-state weight.'''
    H = hamiltonian(point)
    return bool(energy_level(1) <= H < 0.0)


def angular_bound(n):
    '''Supremum of |L3| <= |q||p| over the support H < E_{n+1} of T_n^H:
    sqrt(-1/(2 E_{n+1})).'''
    return float(np.sqrt(-0.5/energy_level(n+1)))


def support_scan(bound, m_max, n_points=4001):
    '''Largest m in 0..m_max whose T_m^L or T_{-m}^L is nonzero somewhere
    on the open interval (-bound, bound).'''
    L3 = np.linspace(-bound, bound, n_points)[1:-1]
    for m in range(m_max, -1, -1):
        if np.any(t_l(m, L3) > 0) or np.any(t_l(-m, L3) > 0):
            return m
    return 0


def zeeman_support(n, n_samples=20000, seed=0):
    '''Largest |m| with T_n^H(H) T_m^L(L3) not identically zero.

    On the support of T_n^H the angular momentum obeys
    |L3| < angular_bound(n), so the observed maximum is the support scan of
    T_m^L over that open interval. A randomized search over near circular
    orbits with energies in (E_n, E_{n+1}) cross-checks it from the
    phase-space side.
    Output: ZeemanSupport(stated_bound=2(n+1), observed_max,
        search_max=largest |m| the search hit).
    '''
    if n < 1:
        raise DomainError(f'Level index must be >= 1, got {n}.')
    stated_bound = 2*(n+1)
    observed_max = support_scan(angular_bound(n), stated_bound+1)

    rng = np.random.default_rng(seed)
    E_lo = float(energy_level(n)) if n > 1 else 2*float(energy_level(1))
    E = rng.uniform(E_lo, float(energy_level(n+1)), n_samples)
    R = -0.5/E * np.exp(0.05*rng.standard_normal(n_samples))
    v2 = 2.0*(E + 1.0/R)
    keep = v2 > 0
    E, R, v = E[keep], R[keep], np.sqrt(v2[keep])
    phi = rng.uniform(0, 2*np.pi, E.size)
    tilt = rng.uniform(0, 0.3, E.size)
    sign = rng.choice([-1.0, 1.0], E.size)
    q = np.stack([R*np.cos(phi), R*np.sin(phi), np.zeros_like(R)], axis=-1)
    # p orthogonal to q, tilted out of the q1-q2 plane
    p = np.stack([-np.sin(phi)*np.cos(tilt), np.cos(phi)*np.cos(tilt),
                  np.sin(tilt)], axis=-1) * (sign*v)[:, None]
    points = np.concatenate([q, p], axis=-1)
    weight_h = g_h(n, points)
    L3 = angular_momentum_3(points)
    search_max = 0
    for m in range(stated_bound+2, -1, -1):
        hit = (weight_h > 0) & ((t_l(m, L3) > 0) | (t_l(-m, L3) > 0))
        if np.any(hit):
            search_max = m
            break
    return ZeemanSupport(stated_bound, observed_max, search_max)


def poisson_stationarity_residual(n, points, step=1e-5):
    '''max |{H, g_H(E_n)}| over points, by central differences. Zero up to
    O(step**2) wherever H is away from the kinks of T_n^H.'''
    points = np.atleast_2d(np.asarray(points, dtype=float))

    def grad(func):
        out = np.empty_like(points)
        for i in range(6):
            shift = np.zeros(6)
            shift[i] = step
            out[:, i] = (func(points + shift) - func(points - shift))/(2*step)
        return out

    dH = grad(hamiltonian)
    dg = grad(lambda x: g_h(n, x))
    bracket = np.sum(dH[:, :3]*dg[:, 3:] - dH[:, 3:]*dg[:, :3], axis=-1)
    return float(np.max(np.abs(bracket)))


def energy_family(x, n_max=8):
    '''{n: T_n^H(x)} for n = 1..n_max on an array of negative energies.'''
    return {n: t_h(n, x) for n in range(1, n_max+1)}


def angular_family(x, m_range=(-3, 3), hbar=1.0):
    '''{m: T_m^L(x)} for m in m_range (inclusive).'''
    return {m: t_l(m, x, hbar) for m in range(m_range[0], m_range[1]+1)}


def MODEL():

    from kamodo import Kamodo
    from time import perf_counter
    import kamodo_phasespace.models.model_utilities as MU

    class MODEL(Kamodo):
        '''Sawtooth spectral functions as Kamodo functions.

        Inputs:
            n_max: number of energy members TH_1..TH_nmax registered.
            m_range: (m_min, m_max) of the angular members registered as
                TL_m (TL_m3 for m = -3).
            variables_requested: list of names from model_varnames
                ('TH', 'TL'); empty registers both families.
            verbose: print timing information.
        '''
        def __init__(self, n_max=8, m_range=(-3, 3), variables_requested=[],
                     verbose=False, **kwargs):
            super(MODEL, self).__init__(**kwargs)
            self.modelname = 'spectral'
            t0 = perf_counter()
            requested = MU.check_requested(variables_requested,
                                           model_varnames)
            if 'TH' in requested:
                for n in range(1, n_max+1):
                    def TH(x, n=n):
                        return t_h(n, x, strict=False)
                    MU.register_function(self, f'TH_{n}', TH, '',
                                         {'x': ''})
            if 'TL' in requested:
                for m in range(m_range[0], m_range[1]+1):
                    def TL(x, m=m):
                        return t_l(m, x)
                    label = f'm{-m}' if m < 0 else f'{m}'
                    MU.register_function(self, f'TL_{label}', TL, '',
                                         {'x': ''})
            if verbose:
                print(f'Took {perf_counter()-t0:.5f}s to register the '
                      'spectral families.')

    return MODEL

# -*- coding: utf-8 -*-
"""
Evolution of a one degree of freedom quasi-density under the generalized
bracket truncated after the first correction,

    d rho/dt = -(p/m) d_q rho + V'(q) d_p rho + a1 hbar**2 V'''(q) d_p**3 rho

with the anharmonic schedule V(q, t) = q**2/2 + lam(t) q**4/2 in oscillator
units m = omega = hbar = 1. Higher corrections vanish identically for a
quartic potential. Derivatives are central finite differences with zero
padding outside the grid; time stepping is classic RK4.
"""
from collections import namedtuple
from dataclasses import dataclass, field, replace
from time import perf_counter

import numpy as np

from kamodo_phasespace.errors import DomainError, InstabilityError

# variable name: [kamodo name, description, index, coordinate system,
#                 coordinate type, [coordinates], display units]
model_varnames = {'rho': ['rho', 'Quasi-density rho(q, p) at the final time',
                          0, 'oscillator', 'phase', ['q', 'p'], ''],
                  'mean_q': ['mean_q', '<q>(t)', 0, 'oscillator', 'time',
                             ['t'], ''],
                  'mean_p': ['mean_p', '<p>(t)', 0, 'oscillator', 'time',
                             ['t'], ''],
                  'mean_p2': ['mean_p2', '<p^2>(t)', 0, 'oscillator', 'time',
                              ['t'], ''],
                  'mean_H': ['mean_H', '<H>(t)', 0, 'oscillator', 'time',
                             ['t'], '']}

moment_names = ['t', 'mean_q', 'mean_p', 'mean_p2', 'mass', 'mean_F',
                'mean_H']
EvolutionResult = namedtuple('EvolutionResult', ['grid', 'moments', 'dt',
                                                 'steps', 'boundary_ratio'])

# RK4 stability radius on the imaginary axis and the largest symbol of the
# central stencils below (first and third derivative)
rk4_radius = 2.8
d1_symbol = 1.3722
d3_symbol = 2.5981


@dataclass
class PhaseGrid:
    '''Uniform (q, p) grid holding values[i, j] = rho(q_i, p_j).'''
    q: np.ndarray
    p: np.ndarray
    values: np.ndarray
    time: float = 0.0
    _mesh: tuple = field(default=None, init=False, repr=False,
                         compare=False)

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.q.size, self.p.size):
            raise DomainError(f'Field shape {self.values.shape} does not '
                              f'match the grid ({self.q.size}, '
                              f'{self.p.size}).')

    @classmethod
    def uniform(cls, bounds=(-8.0, 8.0, -8.0, 8.0), n_q=512, n_p=512,
                func=None):
        '''Grid on [q_min, q_max] x [p_min, p_max]; func(Q, P) fills it
        (zero field by default).'''
        q_min, q_max, p_min, p_max = bounds
        q = np.linspace(q_min, q_max, n_q)
        p = np.linspace(p_min, p_max, n_p)
        Q, P = np.meshgrid(q, p, indexing='ij')
        values = np.zeros_like(Q) if func is None else func(Q, P)
        return cls(q, p, values)

    @property
    def dq(self):
        return self.q[1] - self.q[0]

    @property
    def dp(self):
        return self.p[1] - self.p[0]

    @property
    def bounds(self):
        return (self.q[0], self.q[-1], self.p[0], self.p[-1])

    def mesh(self):
        '''(Q, P) meshes, built on first use and reused by rhs and moments.
        Treat them as read-only.'''
        if self._mesh is None:
            self._mesh = tuple(np.meshgrid(self.q, self.p, indexing='ij'))
        return self._mesh

    def copy(self, values=None):
        out = PhaseGrid(self.q.copy(), self.p.copy(),
                        self.values.copy() if values is None else values,
                        self.time)
        out._mesh = self._mesh
        return out

    def mass(self):
        return float(np.sum(self.values)*self.dq*self.dp)

    def boundary_ratio(self, width=2):
        '''max|rho| on the outer ring of the grid relative to max|rho|.'''
        peak = np.max(np.abs(self.values))
        if peak == 0.0:
            return 0.0
        v = np.abs(self.values)
        ring = max(v[:width].max(), v[-width:].max(), v[:, :width].max(),
                   v[:, -width:].max())
        return float(ring/peak)


def oscillator_ground_state(q0=0.0, p0=0.0):
    '''exp(-((q-q0)**2 + (p-p0)**2))/pi, the harmonic ground state
    (displaced for Ehrenfest checks).'''
    def func(Q, P):
        return np.exp(-((Q - q0)**2 + (P - p0)**2))/np.pi
    return func


def wedge(tau):
    '''max(0, 1 - |1 - 2 tau|): rises from 0 at tau = 0 to 1 at tau = 1/2
    and closes at tau = 1.'''
    return np.maximum(0.0, 1.0 - np.abs(1.0 - 2.0*tau))


@dataclass(frozen=True)
class EvolutionSpec:
    '''Generator and schedule of a run.

    schedule 'wedge': lam(t) = lam_peak wedge(4 omega t/pi), closing at
    t_end = pi/(4 omega). schedule 'constant': lam(t) = lam_peak.
    '''
    a1: float = 0.0
    hbar: float = 1.0
    lam_peak: float = 1.0/3.0
    schedule: str = 'wedge'
    omega: float = 1.0
    t_end: float = np.pi/4
    dt: float = None
    cfl: float = 0.9
    growth_limit: float = 10.0
    boundary_tol: float = 1e-10
    check_every: int = 50

    def __post_init__(self):
        if self.schedule not in ('wedge', 'constant'):
            raise DomainError(f'Schedule {self.schedule} not available. '
                              "Pick from ['wedge', 'constant'].")
        if not self.t_end > 0:
            raise DomainError('t_end must be positive.')

    def lam(self, t):
        if self.schedule == 'constant':
            return self.lam_peak
        return self.lam_peak*float(wedge(4*self.omega*t/np.pi))

    def potential(self, q, t):
        return 0.5*q**2 + 0.5*self.lam(t)*q**4

    def force(self, q, t):
        '''-V'(q, t).'''
        return -(q + 2*self.lam(t)*q**3)

    def third_derivative(self, q, t):
        """V'''(q, t) = 12 lam(t) q."""
        return 12*self.lam(t)*q

    def max_lam(self):
        return abs(self.lam_peak)

    def stable_dt(self, grid):
        '''dt from the combined stencil spectrum: transport in q and p plus
        the dispersive third-derivative term.'''
        q_max = np.max(np.abs(grid.q))
        p_max = np.max(np.abs(grid.p))
        lam = self.max_lam()
        rate = d1_symbol*p_max/grid.dq + \
            d1_symbol*(q_max + 2*lam*q_max**3)/grid.dp + \
            d3_symbol*abs(self.a1)*self.hbar**2*12*lam*q_max/grid.dp**3
        return self.cfl*rk4_radius/rate


def _pad(f, axis):
    width = [(0, 0), (0, 0)]
    width[axis] = (2, 2)
    return np.pad(f, width)


def _shift(f, axis, k):
    '''f_{j+k} on the interior of an array padded by two cells.'''
    n = f.shape[axis] - 4
    index = [slice(None), slice(None)]
    index[axis] = slice(2+k, 2+k+n)
    return f[tuple(index)]


def d1(f, h, axis):
    '''Fourth-order central first derivative with zero padding.'''
    g = _pad(f, axis)
    return (-_shift(g, axis, 2) + 8*_shift(g, axis, 1) -
            8*_shift(g, axis, -1) + _shift(g, axis, -2))/(12*h)


def d3(f, h, axis):
    '''Second-order central third derivative with zero padding.'''
    g = _pad(f, axis)
    return (_shift(g, axis, 2) - 2*_shift(g, axis, 1) +
            2*_shift(g, axis, -1) - _shift(g, axis, -2))/(2*h**3)


def rhs(grid, spec, t, values=None):
    '''Time derivative of the field at time t.

    Inputs:
        grid: PhaseGrid (at least 7 points per axis for the stencils).
        spec: EvolutionSpec.
        t: time at which the potential schedule is evaluated.
        values: field to differentiate instead of grid.values.
    '''
    f = grid.values if values is None else values
    if min(f.shape) < 7:
        raise DomainError(f'Grid {f.shape} is too small for the '
                          'five-point stencils.')
    Q, P = grid.mesh()
    out = -P*d1(f, grid.dq, 0) - spec.force(Q, t)*d1(f, grid.dp, 1)
    if spec.a1 != 0.0 and spec.lam(t) != 0.0:
        out += spec.a1*spec.hbar**2*spec.third_derivative(Q, t) * \
            d3(f, grid.dp, 1)
    return out


def moments(grid, spec, t, values=None):
    '''Row of moment_names for the field at time t.'''
    f = grid.values if values is None else values
    Q, P = grid.mesh()
    cell = grid.dq*grid.dp
    mass = np.sum(f)*cell
    return [t, np.sum(Q*f)*cell, np.sum(P*f)*cell, np.sum(P*P*f)*cell,
            mass, np.sum(spec.force(Q, t)*f)*cell,
            np.sum((0.5*P*P + spec.potential(Q, t))*f)*cell]


def evolve(grid, spec, verbose=False):
    '''Integrate the field from grid.time to spec.t_end.

    Output: EvolutionResult(grid at t_end, moments dict of arrays keyed by
        moment_names, dt, number of steps, largest boundary ring ratio).
    Raises InstabilityError when max|rho| grows beyond growth_limit times
    its initial value or the boundary ring exceeds boundary_tol of max|rho|
    at any check, so every returned result has boundary_ratio <= boundary_tol.
    '''
    t0 = perf_counter()
    dt = spec.dt if spec.dt is not None else spec.stable_dt(grid)
    n_steps = int(np.ceil((spec.t_end - grid.time)/dt - 1e-12))
    dt = (spec.t_end - grid.time)/n_steps
    f = grid.values.copy()
    t = grid.time
    peak0 = np.max(np.abs(f))
    boundary = grid.boundary_ratio()
    rows = [moments(grid, spec, t, f)]
    if verbose:
        print(f'Evolving {f.shape} grid with a1={spec.a1} over '
              f'{n_steps} steps of dt={dt:.3e}')

    for step in range(1, n_steps+1):
        k1 = rhs(grid, spec, t, f)
        k2 = rhs(grid, spec, t + dt/2, f + dt/2*k1)
        k3 = rhs(grid, spec, t + dt/2, f + dt/2*k2)
        k4 = rhs(grid, spec, t + dt, f + dt*k3)
        f = f + dt/6*(k1 + 2*k2 + 2*k3 + k4)
        t = grid.time + step*dt
        rows.append(moments(grid, spec, t, f))

        if step % spec.check_every == 0 or step == n_steps:
            peak = np.max(np.abs(f))
            growth = peak/peak0 if peak0 > 0 else 0.0
            if not np.isfinite(peak) or growth > spec.growth_limit:
                raise InstabilityError(
                    f'max|rho| grew by {growth:.3e} at t={t:.5f} '
                    f'(step {step}, dt={dt:.3e}).', time=t, step=step,
                    growth=growth)
            ratio = grid.copy(f).boundary_ratio()
            boundary = max(boundary, ratio)
            if ratio > spec.boundary_tol:
                raise InstabilityError(
                    f'Boundary ring carries {ratio:.3e} of max|rho| at '
                    f't={t:.5f}; enlarge the domain.', time=t, step=step,
                    growth=growth)

    out = grid.copy(f)
    out.time = t
    table = np.array(rows, dtype=float)
    series = {name: table[:, i] for i, name in enumerate(moment_names)}
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to evolve {n_steps} steps '
              f'(boundary ring at most {boundary:.1e} of max|rho|).')
    return EvolutionResult(out, series, dt, n_steps, boundary)


def ehrenfest_residual(series, mass=1.0):
    '''(max|d<q>/dt - <p>/m|, max|d<p>/dt - <F>|) from the recorded moment
    series, with centered differences in t.'''
    t = series['t']
    dq = np.gradient(series['mean_q'], t, edge_order=2)
    dp = np.gradient(series['mean_p'], t, edge_order=2)
    return (float(np.max(np.abs(dq - series['mean_p']/mass))),
            float(np.max(np.abs(dp - series['mean_F']))))


def anharmonic_run(a1=0.0, n=512, half_width=8.0, p_half_width=40.0,
                   n_p=None, q0=0.0, p0=0.0, verbose=False, **spec_kwargs):
    '''The wedge-schedule experiment from the harmonic ground state.

    The grid spans |q| <= half_width and |p| <= p_half_width with n points
    in q and n_p (default 2n) in p. The quartic kick carries the q ~ 5 tail
    to |p| ~ 13 before the wedge closes, and the a1 term spreads every
    slice into a tail that decays only exponentially in p, roughly as
    exp(-|p|/(144 |a1| q L)) with L the time integral of lam. The p range
    therefore has to be several times the q range to keep the boundary
    ring below boundary_tol at a1 = -1/24.
    '''
    grid = PhaseGrid.uniform((-half_width, half_width, -p_half_width,
                              p_half_width), n, 2*n if n_p is None else n_p,
                             oscillator_ground_state(q0, p0))
    spec = EvolutionSpec(a1=a1, **spec_kwargs)
    return evolve(grid, spec, verbose=verbose)


def with_a1(spec, a1):
    return replace(spec, a1=a1)


def MODEL():

    from kamodo import Kamodo
    import kamodo_phasespace.models.model_utilities as MU

    class MODEL(Kamodo):
        '''Final quasi-density and moment series of an evolution run as
        Kamodo functions.

        Inputs:
            result: EvolutionResult from evolve.
            variables_requested: names from model_varnames; empty means all.
            gridded_int: also register rho_ijk on the (q, p) grid.
            verbose: print timing information.
        '''
        def __init__(self, result, variables_requested=[], gridded_int=True,
                     verbose=False, **kwargs):
            super(MODEL, self).__init__(**kwargs)
            self.modelname = 'dynamics'
            t0 = perf_counter()
            requested = MU.check_requested(variables_requested,
                                           model_varnames)
            grid = result.grid
            if 'rho' in requested:
                MU.Functionalize_Dataset(
                    self, {'q': {'units': '', 'data': grid.q},
                           'p': {'units': '', 'data': grid.p}}, 'rho',
                    {'units': '', 'data': grid.values}, gridded_int, 'phase')
            for name in ('mean_q', 'mean_p', 'mean_p2', 'mean_H'):
                if name in requested:
                    MU.Functionalize_Dataset(
                        self, {'t': {'units': '',
                                     'data': result.moments['t']}}, name,
                        {'units': '', 'data': result.moments[name]}, False,
                        '')
            if verbose:
                print(f'Took {perf_counter()-t0:.5f}s to functionalize the '
                      'evolution run.')

    return MODEL

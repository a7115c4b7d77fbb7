# -*- coding: utf-8 -*-
"""
Integration-by-parts check for the generalized Liouvillian on a 2D phase
space: for rapidly decaying f and g,

    int f (L_h g) dq dp = - int (L_h f) g dq dp.

The test functions are sympy expressions in q1 and p1 (Gaussians times
polynomials), so D**k is applied with sympy.diff and the integral is done on
a tensor Gauss-Legendre grid.
"""
from math import comb

import numpy as np
import sympy as sp

from kamodo_phasespace.algebra.phase_expr import PhaseExpr
from kamodo_phasespace.errors import DomainError

q_sym, p_sym = sp.symbols('q1 p1', real=True)


def _as_test_function(func):
    if isinstance(func, str):
        func = sp.sympify(func, locals={'q1': q_sym, 'p1': p_sym,
                                        'q': q_sym, 'p': p_sym})
    func = sp.sympify(func)
    extra = func.free_symbols - {q_sym, p_sym}
    if extra:
        raise DomainError(f'Test function depends on {sorted(map(str, extra))}'
                          '; only q1 and p1 are allowed.')
    return func


def _partial(expr, first, n_first, second, n_second):
    if n_first:
        expr = sp.diff(expr, first, n_first)
    if n_second:
        expr = sp.diff(expr, second, n_second)
    return expr


def _d_omega_sympy(f, g, k):
    out = sp.Integer(0)
    for j in range(k+1):
        out += (-1)**j * comb(k, j) * \
            _partial(f, q_sym, k-j, p_sym, j) * \
            _partial(g, p_sym, k-j, q_sym, j)
    return out


def liouvillian_sympy(h, func, spec, params):
    '''L_h func = sum_n a_n hbar**(2n) h D**(2n+1) func as a sympy expression
    with every parameter bound to a number.'''
    h_sym = h.to_sympy()
    values = {sp.Symbol(name, real=True): value
              for name, value in params.items()}
    out = _d_omega_sympy(h_sym, func, 1)
    for n in range(1, spec.max_order+1):
        weight = spec.weight(n)
        if weight.is_zero():
            continue
        w = weight.to_sympy().subs(values)
        out += w * _d_omega_sympy(h_sym, func, 2*n+1)
    out = out.subs(values)
    if out.free_symbols - {q_sym, p_sym}:
        raise DomainError('Unbound symbols in L_h: '
                          f'{sorted(map(str, out.free_symbols))}.')
    return out


def adjointness_check(h, f, g, spec, params=None, half_width=10.0,
                      n_nodes=160, tail_threshold=1e-12):
    '''Residual |int f L_h g + int (L_h f) g| over a 2D phase space.

    Inputs:
        h: PhaseExpr in q1, p1 (other coordinates must not appear).
        f, g: sympy expressions or strings in q1, p1 decaying at infinity.
        spec: BracketSpec. Formal parameters (hbar, a_n, ...) are bound by
            params, with hbar defaulting to 1.
        half_width: the integral runs over [-half_width, half_width]**2.
        n_nodes: Gauss-Legendre nodes per axis.
        tail_threshold: largest allowed |f g| on the box boundary relative
            to its maximum inside.
    Output: the residual as a float.
    '''
    h = PhaseExpr.coerce(h)
    params = {'hbar': 1.0, **(params or {})}
    if any(exps[i] for _, _, exps, _ in h.terms() for i in (1, 2, 4, 5)) \
            or h.qpow or any(s for _, s, _, _ in h.terms()):
        raise DomainError('adjointness_check works on one degree of '
                          'freedom: h must be a polynomial in q1 and p1.')
    f, g = _as_test_function(f), _as_test_function(g)

    x, w = np.polynomial.legendre.leggauss(n_nodes)
    x, w = x*half_width, w*half_width
    Q, P = np.meshgrid(x, x, indexing='ij')
    W = np.outer(w, w)

    fg = sp.lambdify((q_sym, p_sym), f*g, 'numpy')
    edge = np.linspace(-half_width, half_width, 201)
    ring = np.abs(np.concatenate([
        np.broadcast_to(fg(half_width, edge), edge.shape),
        np.broadcast_to(fg(-half_width, edge), edge.shape),
        np.broadcast_to(fg(edge, half_width), edge.shape),
        np.broadcast_to(fg(edge, -half_width), edge.shape)]))
    inside = np.max(np.abs(np.broadcast_to(fg(Q, P), Q.shape)))
    if inside == 0.0:
        return 0.0
    if ring.max() > tail_threshold*inside:
        raise DomainError('Test functions do not decay: boundary value '
                          f'{ring.max():.3e} exceeds {tail_threshold:.0e} of '
                          'the interior maximum.')

    integrand = f*liouvillian_sympy(h, g, spec, params) + \
        liouvillian_sympy(h, f, spec, params)*g
    integrand = sp.expand(integrand)
    if integrand == 0:
        return 0.0
    values = np.broadcast_to(
        sp.lambdify((q_sym, p_sym), integrand, 'numpy')(Q, P), Q.shape)
    return float(abs(np.sum(W*values)))

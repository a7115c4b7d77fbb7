# -*- coding: utf-8 -*-
"""
Generalized Moyal bracket engine.

    {f, g}_gen = {f, g} + sum_{n=1..N} a_n hbar**(2n) f D**(2n+1) g

where D is the bidirectional symplectic derivative acting left on f and
right on g. All powers of D are expanded exactly with

    f D**k g = sum_j C(k, j) (-1)**j
               sum_{|alpha|=k-j, |beta|=j} (k-j)!/alpha! j!/beta!
               (d_q**alpha d_p**beta f) (d_p**alpha d_q**beta g).
"""
from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial
from time import perf_counter

from kamodo_phasespace.algebra.phase_expr import PhaseExpr, as_rational
from kamodo_phasespace.errors import DomainError

# polynomial triples for the failure witnesses (one degree of freedom)
jacobi_witness = ('q1^5', 'p1^3', 'q1*p1^3')
leibniz_witness = ('q1^3', 'p1^2', 'p1^2')


def moyal_coefficient(n):
    '''a_n = (-1)**n / (2**(2n) (2n+1)!) as an exact rational.'''
    return as_rational(f'{(-1)**n}/{2**(2*n) * factorial(2*n+1)}')


def _scalar(value):
    if isinstance(value, PhaseExpr):
        return value
    if isinstance(value, str) and value.isidentifier():
        return PhaseExpr.param(value)
    return PhaseExpr.coerce(value)


@dataclass(frozen=True)
class BracketSpec:
    '''Coefficients a_1..a_N of the generalized bracket (a_0 = 1 fixed), the
    value of hbar (rational or formal symbol) and the truncation order.

    Coefficients may be rationals ("-1/24", -1/24 as a float is converted
    exactly) or symbol names ("a1").'''
    coeffs: tuple = ()
    hbar: object = 'hbar'
    max_order: int = None
    name: str = field(default='custom', compare=False)

    def __post_init__(self):
        coeffs = tuple(_scalar(c) for c in self.coeffs)
        max_order = len(coeffs) if self.max_order is None else \
            int(self.max_order)
        if max_order < 0:
            raise DomainError('max_order must be nonnegative.')
        if len(coeffs) < max_order:
            raise DomainError(f'max_order={max_order} needs at least that '
                              f'many coefficients, got {len(coeffs)}.')
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'hbar', _scalar(self.hbar))
        object.__setattr__(self, 'max_order', max_order)

    @classmethod
    def poisson(cls, hbar='hbar'):
        return cls((), hbar, 0, name='poisson')

    @classmethod
    def moyal(cls, max_order=3, hbar='hbar'):
        return cls(tuple(moyal_coefficient(n) for n in
                         range(1, max_order+1)), hbar, max_order,
                   name='moyal')

    @classmethod
    def truncated_moyal(cls, max_order=2, keep=1, hbar='hbar'):
        '''Moyal values for n <= keep, zero for keep < n <= max_order.'''
        return cls(tuple(moyal_coefficient(n) if n <= keep else 0
                         for n in range(1, max_order+1)), hbar, max_order,
                   name='truncated_moyal')

    @classmethod
    def symbolic(cls, max_order=1, hbar='hbar'):
        '''Formal coefficients a1, a2, ... kept as parameters.'''
        return cls(tuple(f'a{n}' for n in range(1, max_order+1)), hbar,
                   max_order, name='symbolic')

    @classmethod
    def from_name(cls, name, max_order=3, hbar='hbar'):
        presets = {'poisson': lambda: cls.poisson(hbar),
                   'moyal': lambda: cls.moyal(max_order, hbar),
                   'truncated_moyal': lambda: cls.truncated_moyal(
                       max(max_order, 2), 1, hbar),
                   'symbolic': lambda: cls.symbolic(max_order, hbar)}
        if name not in presets:
            raise DomainError(f'Bracket preset {name} not available. Pick '
                              f'from {list(presets)}.')
        return presets[name]()

    def weight(self, n):
        '''a_n hbar**(2n) as a PhaseExpr.'''
        return self.coeffs[n-1] * self.hbar**(2*n)

    def describe(self):
        return {'name': self.name, 'max_order': self.max_order,
                'hbar': str(self.hbar),
                'coeffs': [str(c) for c in self.coeffs[:self.max_order]]}


class _Derivatives:
    '''Cache of mixed partial derivatives of one expression, keyed by the
    derivative counts (dq1, dq2, dq3, dp1, dp2, dp3).'''

    _names = ('q1', 'q2', 'q3', 'p1', 'p2', 'p3')

    def __init__(self, expr):
        self.expr = expr.canonical()
        self.cache = {(0,)*6: self.expr}
        terms = self.expr.terms()
        self.poly = self.expr.is_polynomial
        # p never enters a denominator, so its exponents bound p-derivatives
        self.max_exp = [max((exps[i] for _, _, exps, _ in terms), default=-1)
                        for i in range(6)]

    def _vanishes(self, key):
        for i in range(3, 6):
            if key[i] > self.max_exp[i]:
                return True
        if self.poly:
            return any(key[i] > self.max_exp[i] for i in range(3))
        return False

    def get(self, key):
        if key in self.cache:
            return self.cache[key]
        if self._vanishes(key):
            value = PhaseExpr.zero()
        else:
            i = next(i for i, n in enumerate(key) if n)
            parent = list(key)
            parent[i] -= 1
            base = self.get(tuple(parent))
            value = PhaseExpr.zero() if base.is_zero() else \
                base.diff(self._names[i])
        self.cache[key] = value
        return value


def _compositions(total, parts=3):
    '''All (a1, .., a_parts) of nonnegative integers summing to total.'''
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(alpha):
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out


def d_omega_pow(f, g, k, _cache=None):
    '''Exact f D**k g. k = 0 returns f*g.

    Inputs:
        f, g: PhaseExpr (or anything PhaseExpr.coerce accepts).
        k: nonnegative integer power of the symplectic derivative.
    Output: canonical PhaseExpr.
    '''
    f, g = PhaseExpr.coerce(f), PhaseExpr.coerce(g)
    if k < 0:
        raise DomainError('The power of D must be nonnegative.')
    if k == 0:
        return (f*g).canonical()
    df, dg = _cache if _cache is not None else (_Derivatives(f),
                                                _Derivatives(g))
    total = PhaseExpr.zero()
    for j in range(k+1):
        sign_binom = (-1)**j * comb(k, j)
        for alpha in _compositions(k-j):
            ca = _multinomial(alpha)
            for beta in _compositions(j):
                lhs = df.get(alpha + beta)
                if lhs.is_zero():
                    continue
                rhs = dg.get(beta + alpha)
                if rhs.is_zero():
                    continue
                total = total + (lhs*rhs) * (sign_binom * ca *
                                             _multinomial(beta))
    return total.canonical()


def poisson(f, g):
    '''The Poisson bracket {f, g} = f D g.'''
    return d_omega_pow(f, g, 1)


def truncation_complete(f, g, spec):
    '''True when every order n > spec.max_order provably vanishes, i.e. when
    2n+1 exceeds the degree of a purely polynomial operand.'''
    f, g = PhaseExpr.coerce(f), PhaseExpr.coerce(g)
    if f.is_zero() or g.is_zero():
        return True
    first_omitted = 2*(spec.max_order + 1) + 1
    degrees = [x.degree() for x in (f, g) if x.is_polynomial]
    return bool(degrees) and min(degrees) < first_omitted


def gmb(f, g, spec, return_complete=False, verbose=False):
    '''Generalized Moyal bracket of f and g.

    Inputs:
        f, g: PhaseExpr operands.
        spec: BracketSpec with the coefficients a_n, hbar and max_order.
        return_complete: if True, also return whether all omitted orders
            provably vanish for these operands.
    Output: PhaseExpr, or (PhaseExpr, bool) when return_complete is True.
    '''
    t0 = perf_counter()
    f, g = PhaseExpr.coerce(f), PhaseExpr.coerce(g)
    cache = (_Derivatives(f), _Derivatives(g))
    result = d_omega_pow(f, g, 1, _cache=cache)
    for n in range(1, spec.max_order+1):
        weight = spec.weight(n)
        if weight.is_zero():
            continue
        term = d_omega_pow(f, g, 2*n+1, _cache=cache)
        if not term.is_zero():
            result = result + weight*term
    result = result.canonical()
    if verbose:
        print(f'Took {perf_counter()-t0:.5f}s to compute the bracket up to '
              f'order {spec.max_order}.')
    if return_complete:
        return result, truncation_complete(f, g, spec)
    return result


def check_zero_orderwise(f, g, K):
    '''[f D**k g == 0 for k = 1, 3, ..., 2K+1]. All True means f and g
    commute under every choice of coefficients a_n up to order K.'''
    f, g = PhaseExpr.coerce(f), PhaseExpr.coerce(g)
    cache = (_Derivatives(f), _Derivatives(g))
    return [d_omega_pow(f, g, k, _cache=cache).is_zero()
            for k in range(1, 2*K+2, 2)]


def liouvillian_product(steps, target, spec):
    '''Apply (id - w_k L_{H_k}) ... (id - w_0 L_{H_0}) to target, where
    L_H f = gmb(H, f, spec). steps = [(H_k, w_k), ..., (H_0, w_0)], latest
    time first, so the last entry acts first.'''
    out = PhaseExpr.coerce(target)
    for H, weight in reversed(list(steps)):
        H, weight = PhaseExpr.coerce(H), _scalar(weight)
        out = out - weight*gmb(H, out, spec)
    return out.canonical()


def jacobiator(f, g, h, spec):
    '''gmb(f, gmb(g, h)) + gmb(g, gmb(h, f)) + gmb(h, gmb(f, g)).'''
    f, g, h = (PhaseExpr.coerce(x) for x in (f, g, h))
    return (gmb(f, gmb(g, h, spec), spec) + gmb(g, gmb(h, f, spec), spec) +
            gmb(h, gmb(f, g, spec), spec)).canonical()


def leibniz_defect(f, g, h, spec):
    '''gmb(f, g h) - h gmb(f, g) - g gmb(f, h); zero for the Poisson
    bracket.'''
    f, g, h = (PhaseExpr.coerce(x) for x in (f, g, h))
    return (gmb(f, g*h, spec) - h*gmb(f, g, spec) -
            g*gmb(f, h, spec)).canonical()


def random_polynomial(rng, degree=3, n_terms=4, dof=1, coeff_range=5):
    '''Random polynomial with small integer coefficients in the first dof
    coordinate pairs. Used by the property checks.'''
    raw = []
    for _ in range(n_terms):
        exps = [0]*6
        for _ in range(int(rng.integers(0, degree+1))):
            i = int(rng.integers(0, dof))
            exps[i + 3*int(rng.integers(0, 2))] += 1
        c = int(rng.integers(-coeff_range, coeff_range+1)) or 1
        raw.append((c, 0, exps, ()))
    return PhaseExpr.from_terms(raw)


def property_report(spec, rng, n_trials=5, dof=1):
    '''Exact property checks on random instances, returned as a dict of
    booleans: bilinearity, parity of even and odd powers, reduction to
    Poisson for second order polynomials, energy self conservation.'''
    results = {'bilinearity': True, 'parity': True, 'second_order': True,
               'antisymmetry': True}
    for _ in range(n_trials):
        f1, f2, g = (random_polynomial(rng, 4, 4, dof) for _ in range(3))
        a, b = (int(x) or 1 for x in rng.integers(-4, 5, size=2))
        lhs = gmb(a*f1 + b*f2, g, spec)
        rhs = a*gmb(f1, g, spec) + b*gmb(f2, g, spec)
        results['bilinearity'] &= (lhs - rhs).is_zero()
        for k in (2, 3, 4):
            sign = 1 if k % 2 == 0 else -1
            results['parity'] &= (d_omega_pow(f1, g, k) -
                                  sign*d_omega_pow(g, f1, k)).is_zero()
        p2 = random_polynomial(rng, 2, 4, dof)
        results['second_order'] &= (gmb(f1, p2, spec) -
                                     poisson(f1, p2)).is_zero()
        results['antisymmetry'] &= gmb(f1, f1, spec).is_zero()
    return results


def qp_power_identity(n):
    '''(q1 p1)**n D**(2n) (q1 p1)**n, expected (-1)**n (2n)! (n!)**2.'''
    x = PhaseExpr.parse('q1*p1')**n
    return d_omega_pow(x, x, 2*n)


def qp_shift_example(n):
    '''(q**n p**(n+1)) D**(2n+1) (q**(2n) p**(2n+2)) and the closed form
    (-1)**(n+1) (2n)!(2n+1)!(2n+2)!/((n-1)!(n+2)!) q**(n-1) p**(n+2).'''
    f = PhaseExpr.parse(f'q1^{n}*p1^{n+1}')
    g = PhaseExpr.parse(f'q1^{2*n}*p1^{2*n+2}')
    value = d_omega_pow(f, g, 2*n+1)
    c = (-1)**(n+1) * factorial(2*n) * factorial(2*n+1) * \
        factorial(2*n+2) // (factorial(n-1) * factorial(n+2))
    expected = PhaseExpr.parse(f'{c}*q1^{n-1}*p1^{n+2}')
    return value, expected


def evaluate(f, point, params=None):
    '''Floating value of f at a phase-space point with bound parameters.'''
    return PhaseExpr.coerce(f).evaluate(point, params)

# -*- coding: utf-8 -*-
"""
Exact phase-space expressions.

A PhaseExpr is a finite sum of terms
    coeff * r**s * q1**a1 q2**a2 q3**a3 * p1**b1 p2**b2 p3**b3 * params
divided by a common power Q**k, where Q = q1**2 + q2**2 + q3**2 = r**2,
s is 0 or 1, coeff is an exact rational from the sympy QQ domain and params
is a monomial (integer exponents, negative allowed) in named formal symbols
such as hbar, m, omega, t, a1, lam1 or n.

Since r is not a rational function of the q_i, an expression written as
(A + B*r)/Q**k is zero iff A = 0 and B = 0, which makes zero testing exact.
"""
import json
import re
from functools import lru_cache
from math import factorial

import sympy as sp
from sympy.polys.domains import QQ
from sympy.parsing.sympy_parser import (parse_expr, standard_transformations,
                                        convert_xor)

from kamodo_phasespace.errors import DomainError

# phase space coordinates in exponent-tuple order
phase_vars = ('q1', 'q2', 'q3', 'p1', 'p2', 'p3')
var_index = {name: i for i, name in enumerate(phase_vars)}
_zero_exps = (0, 0, 0, 0, 0, 0)
_identifier = re.compile(r'[A-Za-z_][A-Za-z_0-9]*')
_transformations = standard_transformations + (convert_xor,)


def as_rational(value):
    '''Convert int, str ("-1/24"), sympy Rational, float (exact binary value)
    or a QQ element into a QQ element.'''
    if isinstance(value, bool):
        raise DomainError(f'{value!r} is not a rational number.')
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        value = sp.Rational(value)
    elif isinstance(value, float):
        value = sp.Rational(value)
    if isinstance(value, sp.Basic):
        if not value.is_Rational:
            raise DomainError(f'{value} is not an exact rational number.')
        return QQ.from_sympy(value)
    try:
        return QQ.convert(value)
    except Exception as err:
        raise DomainError(f'{value!r} is not a rational number.') from err


def qq_to_float(c):
    return int(c.numerator) / int(c.denominator)


def qq_to_str(c):
    if int(c.denominator) == 1:
        return str(int(c.numerator))
    return f'{int(c.numerator)}/{int(c.denominator)}'


@lru_cache(maxsize=64)
def _q_power(n):
    '''Expansion of Q**n as {(a1, a2, a3): coeff}.'''
    out = {}
    for a in range(n+1):
        for b in range(n+1-a):
            c = n - a - b
            out[(2*a, 2*b, 2*c)] = factorial(n) // (factorial(a) *
                                                     factorial(b) *
                                                     factorial(c))
    return out


def _merge_params(pa, pb):
    if not pa:
        return pb
    if not pb:
        return pa
    merged = dict(pa)
    for name, e in pb:
        e2 = merged.get(name, 0) + e
        if e2 == 0:
            merged.pop(name, None)
        else:
            merged[name] = e2
    return tuple(sorted(merged.items()))


def _params_tuple(params):
    if not params:
        return ()
    if isinstance(params, dict):
        params = params.items()
    return tuple(sorted((str(k), int(v)) for k, v in params if int(v) != 0))


def _build(raw_terms, k):
    '''Normalize raw terms (coeff, rpow, exps, params) over Q**k so that
    every r power is 0 or 1 and all terms share one Q denominator.'''
    raw_terms = [t for t in raw_terms if t[0] != 0]
    if not raw_terms:
        return {}, 0
    shifts = [t[1] // 2 for t in raw_terms]
    k_new = k + max(0, -min(shifts))
    terms = {}
    for (c, e, exps, params), j in zip(raw_terms, shifts):
        s = e - 2*j
        n = k_new - k + j
        if n == 0:
            items = (((0, 0, 0), 1),)
        else:
            items = _q_power(n).items()
        for (a1, a2, a3), m in items:
            key = (s, (exps[0]+a1, exps[1]+a2, exps[2]+a3) + exps[3:],
                   params)
            val = terms.get(key, QQ.zero) + c*m
            if val == 0:
                terms.pop(key, None)
            else:
                terms[key] = val
    if not terms:
        return {}, 0
    return terms, k_new


def _divide_by_Q(terms):
    '''Exact division of the numerator by Q, or None when Q does not
    divide it. Works group-wise over the q-polynomial coefficients.'''
    q1, q2, q3 = sp.symbols('q1 q2 q3')
    Qpoly = sp.Poly(q1**2 + q2**2 + q3**2, q1, q2, q3, domain=QQ)
    groups = {}
    for (s, exps, params), c in terms.items():
        groups.setdefault((s, exps[3:], params), {})[exps[:3]] = c
    out = {}
    for (s, pexps, params), poly_dict in groups.items():
        P = sp.Poly.from_dict(poly_dict, q1, q2, q3, domain=QQ)
        quo, rem = P.div(Qpoly)
        if not rem.is_zero:
            return None
        for qexps, c in quo.as_dict(native=True).items():
            out[(s, tuple(qexps) + pexps, params)] = c
    return out


class PhaseExpr:
    '''Immutable exact expression (A + B*r)/Q**k on 3+3 dimensional phase
    space with rational coefficients and formal parameters.'''

    __slots__ = ('_terms', '_k', '_reduced')

    def __init__(self, terms=None, k=0, _reduced=False):
        self._terms = dict(terms) if terms else {}
        self._k = k if self._terms else 0
        self._reduced = _reduced or not self._terms or self._k == 0

    # ----- constructors
    @classmethod
    def from_terms(cls, raw_terms, k=0):
        '''Build from raw tuples (coeff, rpow, exps6, params) over Q**k.'''
        raw = [(as_rational(c), int(e), tuple(exps), _params_tuple(params))
               for c, e, exps, params in raw_terms]
        for _, _, exps, _ in raw:
            if len(exps) != 6 or any(a < 0 for a in exps):
                raise DomainError('Phase-space exponents must be six '
                                  f'nonnegative integers, got {exps}.')
        terms, k = _build(raw, k)
        return cls(terms, k)

    @classmethod
    def const(cls, value):
        return cls.from_terms([(value, 0, _zero_exps, ())])

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls.const(1)

    @classmethod
    def var(cls, name):
        '''Coordinate q1..q3, p1..p3, the radius r, or a formal parameter.'''
        if name == 'r':
            return cls.radial(1)
        if name in var_index:
            exps = [0]*6
            exps[var_index[name]] = 1
            return cls.from_terms([(1, 0, exps, ())])
        return cls.param(name)

    @classmethod
    def radial(cls, power):
        return cls.from_terms([(1, power, _zero_exps, ())])

    @classmethod
    def param(cls, name, power=1):
        if name in var_index or name == 'r':
            raise DomainError(f'{name} is a phase-space variable, not a '
                              'parameter.')
        return cls.from_terms([(1, 0, _zero_exps, ((name, power),))])

    @classmethod
    def coerce(cls, value):
        if isinstance(value, PhaseExpr):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, sp.Basic):
            return cls.from_sympy(value)
        return cls.const(value)

    @classmethod
    def from_sympy(cls, expr):
        '''Convert a sympy expression built from q1..p3, r, rational numbers
        and parameter symbols. Anything else is outside the ring.'''
        expr = sp.expand(sp.sympify(expr))
        raw = []
        for term in sp.Add.make_args(expr):
            if term == 0:
                continue
            coeff, rest = term.as_coeff_Mul()
            if not coeff.is_Rational:
                raise DomainError(f'Coefficient {coeff} in {term} is not an '
                                  'exact rational.')
            exps = [0]*6
            rpow = 0
            params = {}
            for factor in sp.Mul.make_args(rest):
                if factor == 1:
                    continue
                base, e = factor.as_base_exp()
                if not (isinstance(base, sp.Symbol) and e.is_Integer):
                    raise DomainError(f'Atom {factor} is outside the '
                                      'phase-space ring (only polynomials in '
                                      'q_i, p_i, powers of r and parameter '
                                      'monomials are allowed).')
                name, e = base.name, int(e)
                if name in var_index:
                    if e < 0:
                        raise DomainError(f'Negative power of {name} in '
                                          f'{term}; only r may appear in a '
                                          'denominator.')
                    exps[var_index[name]] += e
                elif name == 'r':
                    rpow += e
                else:
                    params[name] = params.get(name, 0) + e
            raw.append((QQ.from_sympy(coeff), rpow, tuple(exps),
                        _params_tuple(params)))
        terms, k = _build(raw, 0)
        return cls(terms, k).canonical()

    @classmethod
    def parse(cls, text):
        '''Parse the plain-text syntax, e.g. "q1^2*p3 - 2/3*r^-1" or
        "p1^2/(2*m) + lam1*q1^4". Every identifier that is not a phase-space
        variable or r becomes a formal parameter.'''
        if not isinstance(text, str) or not text.strip():
            raise DomainError('Empty expression.')
        names = set(_identifier.findall(text))
        local = {name: sp.Symbol(name, real=True) for name in names}
        try:
            expr = parse_expr(text, local_dict=local,
                              transformations=_transformations,
                              evaluate=True)
        except Exception as err:
            raise DomainError(f'Cannot parse expression {text!r}: {err}') \
                from err
        return cls.from_sympy(expr)

    # ----- structure
    @property
    def qpow(self):
        '''The k in the common denominator Q**k.'''
        return self._k

    def terms(self):
        '''Sorted (coeff, rpow, exps6, params) of the canonical form.'''
        c = self.canonical()
        return [(v, s, exps, params) for (s, exps, params), v in
                sorted(c._terms.items())]

    def is_zero(self):
        return not self._terms

    @property
    def is_polynomial(self):
        '''True when free of r and of Q denominators.'''
        c = self.canonical()
        return c._k == 0 and all(s == 0 for s, _, _ in c._terms)

    def degree(self):
        '''Total degree in q and p of a polynomial expression.'''
        if not self.is_polynomial:
            raise DomainError('degree() needs a polynomial expression.')
        if self.is_zero():
            return -1
        return max(sum(exps) for _, exps, _ in self._terms)

    def parameters(self):
        return sorted({name for _, _, params in self._terms
                       for name, _ in params})

    def canonical(self):
        '''Reduced form: no common factor Q between numerator and Q**k.'''
        if self._reduced:
            return self
        terms, k = self._terms, self._k
        while k > 0:
            divided = _divide_by_Q(terms)
            if divided is None:
                break
            terms, k = divided, k-1
        return PhaseExpr(terms, k, _reduced=True)

    # ----- arithmetic
    def _raw(self):
        return [(c, s, exps, params) for (s, exps, params), c in
                self._terms.items()]

    def __add__(self, other):
        if not isinstance(other, PhaseExpr):
            try:
                other = PhaseExpr.const(other)
            except DomainError:
                return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        k = max(self._k, other._k)
        raw = []
        for expr in (self, other):
            shift = k - expr._k
            if shift == 0:
                raw.extend(expr._raw())
            else:
                raw.extend((c, s + 2*shift, exps, params)
                           for c, s, exps, params in expr._raw())
        terms, k = _build(raw, k)
        return PhaseExpr(terms, k)

    __radd__ = __add__

    def __neg__(self):
        return PhaseExpr({key: -c for key, c in self._terms.items()},
                         self._k, self._reduced)

    def __sub__(self, other):
        if not isinstance(other, PhaseExpr):
            try:
                other = PhaseExpr.const(other)
            except DomainError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PhaseExpr):
            try:
                c = as_rational(other)
            except DomainError:
                return NotImplemented
            if c == 0:
                return PhaseExpr()
            return PhaseExpr({key: v*c for key, v in self._terms.items()},
                             self._k, self._reduced)
        if self.is_zero() or other.is_zero():
            return PhaseExpr()
        raw = []
        for (s1, e1, pa), c1 in self._terms.items():
            for (s2, e2, pb), c2 in other._terms.items():
                raw.append((c1*c2, s1+s2,
                            tuple(x+y for x, y in zip(e1, e2)),
                            _merge_params(pa, pb)))
        terms, k = _build(raw, self._k + other._k)
        return PhaseExpr(terms, k)

    __rmul__ = __mul__

    def _inverse(self):
        '''Inverse of a single term free of q_i and p_i.'''
        c = self.canonical()
        if len(c._terms) != 1:
            raise DomainError('Only single-term expressions in r and '
                              'parameters can be inverted.')
        ((s, exps, params), v), = c._terms.items()
        if any(exps):
            raise DomainError('Cannot invert a polynomial in q_i or p_i.')
        inv_params = tuple((name, -e) for name, e in params)
        return PhaseExpr.from_terms([(1/v, -s + 2*c._k, _zero_exps,
                                      inv_params)])

    def __truediv__(self, other):
        if not isinstance(other, PhaseExpr):
            c = as_rational(other)
            if c == 0:
                raise ZeroDivisionError('division of PhaseExpr by zero')
            return self * (1/c)
        return self * other._inverse()

    def __rtruediv__(self, other):
        return PhaseExpr.coerce(other) * self._inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self._inverse() ** (-n)
        out = PhaseExpr.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, PhaseExpr):
            try:
                other = PhaseExpr.coerce(other)
            except DomainError:
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        c = self.canonical()
        return hash((c._k, tuple(sorted(c._terms.items()))))

    def __bool__(self):
        return not self.is_zero()

    # ----- calculus
    def diff(self, var):
        '''Partial derivative with respect to q1..q3 or p1..p3, using
        d r**e/dq_i = e*q_i*r**(e-2) and d Q**-k/dq_i = -2k*q_i*Q**(-k-1).'''
        if var not in var_index:
            raise DomainError(f'Cannot differentiate by {var}. Pick from '
                              f'{phase_vars}.')
        i = var_index[var]
        raw = []
        if i >= 3 or (self._k == 0 and
                      all(s == 0 for s, _, _ in self._terms)):
            for (s, exps, params), c in self._terms.items():
                if exps[i]:
                    e = list(exps)
                    e[i] -= 1
                    raw.append((c*exps[i], s, tuple(e), params))
            terms, k = _build(raw, self._k)
            return PhaseExpr(terms, k).canonical()
        # general case over Q**(k+1):
        #   Q*dN_explicit + sum_{s=1} c q_i q^a r - 2k q_i N
        k = self._k
        for (s, exps, params), c in self._terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                raw.append((c*exps[i], s + 2, tuple(e), params))
            e = list(exps)
            e[i] += 1
            e = tuple(e)
            if s == 1:
                raw.append((c, 1, e, params))
            if k:
                raw.append((-2*k*c, s, e, params))
        terms, k_new = _build(raw, k + 1)
        return PhaseExpr(terms, k_new).canonical()

    # ----- substitution and inspection
    def subs(self, values):
        '''Substitute exact rational values for named parameters.'''
        values = {name: as_rational(v) for name, v in values.items()}
        raw = []
        for (s, exps, params), c in self._terms.items():
            kept = []
            for name, e in params:
                if name in values:
                    v = values[name]
                    if v == 0 and e < 0:
                        raise DomainError(f'Parameter {name} appears with '
                                          'negative power; cannot set it '
                                          'to zero.')
                    c = c * v**e if e > 0 else c / v**(-e)
                else:
                    kept.append((name, e))
            raw.append((c, s, exps, tuple(kept)))
        terms, k = _build(raw, self._k)
        return PhaseExpr(terms, k).canonical()

    def coefficient(self, q=(0, 0, 0), p=(0, 0, 0), params=None, rpow=0):
        '''Rational coefficient of one monomial of the canonical numerator
        (the Q**k denominator is left in place).'''
        c = self.canonical()
        key = (rpow, tuple(q) + tuple(p), _params_tuple(params))
        return c._terms.get(key, QQ.zero)

    def evaluate(self, point, params=None):
        '''Floating value at point = (q1, q2, q3, p1, p2, p3).'''
        params = params or {}
        if len(point) != 6:
            raise DomainError('A phase-space point has six coordinates.')
        missing = [name for name in self.parameters() if name not in params]
        if missing:
            raise DomainError(f'Unbound symbols {missing}. Bind them with '
                              'params={name: value}.')
        q1, q2, q3 = (float(x) for x in point[:3])
        Q = q1*q1 + q2*q2 + q3*q3
        if Q == 0.0 and (self._k > 0):
            raise DomainError('Singular point: |q| = 0 with a negative '
                              'power of r.')
        r = Q ** 0.5
        values = [float(x) for x in point]
        total = 0.0
        for (s, exps, pmono), c in self._terms.items():
            term = qq_to_float(c)
            if s:
                term *= r
            for x, a in zip(values, exps):
                if a:
                    term *= x**a
            for name, e in pmono:
                term *= float(params[name])**e
            total += term
        if self._k:
            total /= Q**self._k
        return total

    # ----- conversion
    def to_sympy(self):
        '''sympy form with the Q denominator written as a power of r.'''
        c = self.canonical()
        syms = {name: sp.Symbol(name, real=True) for name in phase_vars}
        r = sp.Symbol('r', positive=True)
        out = sp.Integer(0)
        for (s, exps, params), v in c._terms.items():
            term = QQ.to_sympy(v) * r**(s - 2*c._k)
            for name, a in zip(phase_vars, exps):
                term *= syms[name]**a
            for name, e in params:
                term *= sp.Symbol(name, real=True)**e
            out += term
        return out

    def to_json_obj(self):
        c = self.canonical()
        return {'qpow': c._k,
                'terms': [{'coeff': qq_to_str(v), 'rpow': s,
                           'q': list(exps[:3]), 'p': list(exps[3:]),
                           'params': dict(params)}
                          for v, s, exps, params in c.terms()]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text) if isinstance(text, str) else text
        raw = [(t['coeff'], t['rpow'], tuple(t['q']) + tuple(t['p']),
                t.get('params', {})) for t in obj['terms']]
        return cls.from_terms(raw, obj.get('qpow', 0)).canonical()

    def __str__(self):
        return str(self.to_sympy())

    def __repr__(self):
        return f'PhaseExpr({self})'


def symbols(names):
    '''PhaseExpr variables for a space separated list of names.'''
    return tuple(PhaseExpr.var(name) for name in names.split())

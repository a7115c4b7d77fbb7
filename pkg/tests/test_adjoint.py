from kamodo_phasespace.algebra import BracketSpec, PhaseExpr, \
    adjointness_check
from kamodo_phasespace.errors import DomainError
import pytest

f = 'exp(-(q1**2 + p1**2)/2)'
g = 'q1*exp(-(q1**2 + p1**2)/2)'


def test_poisson_quadratic():
    residual = adjointness_check(PhaseExpr.parse('q1^2'), f, g,
                                 BracketSpec.poisson())
    assert residual <= 1e-8


def test_moyal_quartic():
    residual = adjointness_check(PhaseExpr.parse('q1^4'), f, g,
                                 BracketSpec.moyal(1))
    assert residual <= 1e-6


def test_symbolic_coefficient_needs_binding():
    h = PhaseExpr.parse('p1^2/2 + q1^4')
    with pytest.raises(DomainError):
        adjointness_check(h, f, g, BracketSpec.symbolic(1))
    residual = adjointness_check(h, f, g, BracketSpec.symbolic(1),
                                 params={'a1': -1/24, 'hbar': 0.5})
    assert residual <= 1e-6


def test_rejects_three_dimensional_generator():
    with pytest.raises(DomainError):
        adjointness_check(PhaseExpr.parse('q2^2'), f, g,
                          BracketSpec.poisson())


def test_rejects_non_decaying_test_functions():
    with pytest.raises(DomainError):
        adjointness_check(PhaseExpr.parse('q1^2'), 'q1', 'p1',
                          BracketSpec.poisson())

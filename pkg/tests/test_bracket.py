from math import factorial

from kamodo_phasespace.algebra import BracketSpec, PhaseExpr, gmb, poisson, \
    d_omega_pow, check_zero_orderwise, jacobiator, leibniz_defect, \
    moyal_coefficient, truncation_complete
from kamodo_phasespace.algebra.bracket import property_report, \
    qp_power_identity, qp_shift_example, random_polynomial, \
    jacobi_witness, leibniz_witness
from kamodo_phasespace.errors import DomainError
from sympy.polys.domains import QQ
import numpy as np
import pytest

seed = 0
f_example = PhaseExpr.parse('q1*p1^2')
g_example = PhaseExpr.parse('q1^2*p1^4')


def test_moyal_coefficients():
    assert moyal_coefficient(1) == QQ(-1, 24)
    assert moyal_coefficient(2) == QQ(1, 1920)
    spec = BracketSpec.moyal(2)
    assert spec.weight(1) == PhaseExpr.parse('-hbar^2/24')


def test_canonical_pair():
    q1, p1 = PhaseExpr.var('q1'), PhaseExpr.var('p1')
    assert poisson(q1, p1) == PhaseExpr.one()
    assert gmb(q1, p1, BracketSpec.moyal(3)) == PhaseExpr.one()


def test_example_bracket():
    assert poisson(f_example, g_example).is_zero()
    result, complete = gmb(f_example, g_example, BracketSpec.symbolic(3),
                           return_complete=True)
    assert result == PhaseExpr.parse('48*a1*hbar^2*p1^3')
    assert complete
    assert check_zero_orderwise(f_example, g_example, 3) == \
        [True, False, True, True]


def test_truncation_flag():
    assert truncation_complete(f_example, g_example, BracketSpec.symbolic(1))
    assert not truncation_complete(f_example, g_example,
                                   BracketSpec.poisson())
    H = PhaseExpr.parse('p1^2/2 - 1/r')
    assert not truncation_complete(H, PhaseExpr.parse('1/r'),
                                   BracketSpec.moyal(1))


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_qp_power_identity(n):
    expected = (-1)**n*factorial(2*n)*factorial(n)**2
    assert qp_power_identity(n) == PhaseExpr.const(expected)


@pytest.mark.parametrize('n,text', [(1, '48*p1^3'),
                                    (2, '-86400*q1*p1^4'),
                                    (3, None)])
def test_qp_shift_example(n, text):
    value, expected = qp_shift_example(n)
    assert value == expected
    if text is not None:
        assert value == PhaseExpr.parse(text)


def test_zeroth_power_is_product():
    assert d_omega_pow(f_example, g_example, 0) == f_example*g_example


def test_property_report():
    report = property_report(BracketSpec.moyal(3),
                             np.random.default_rng(seed), n_trials=4)
    assert all(report.values()), report


@pytest.mark.parametrize('trial', range(4))
def test_antisymmetry(trial):
    rng = np.random.default_rng(seed + trial)
    spec = BracketSpec.symbolic(2)
    f, g = random_polynomial(rng, 5, 4), random_polynomial(rng, 5, 4)
    assert gmb(f, g, spec) == -gmb(g, f, spec)


def test_jacobi_holds_for_full_moyal_and_fails_when_truncated():
    assert jacobiator(*jacobi_witness, BracketSpec.moyal(3)).is_zero()
    assert not jacobiator(*jacobi_witness,
                          BracketSpec.truncated_moyal(2, 1)).is_zero()


def test_leibniz_defect():
    f, g, h = leibniz_witness
    assert leibniz_defect(f, g, h, BracketSpec.poisson()).is_zero()
    defect = leibniz_defect(f, g, h, BracketSpec.moyal(1))
    assert defect == PhaseExpr.parse('-6*hbar^2*p1')


def test_spec_validation():
    with pytest.raises(DomainError):
        BracketSpec.from_name('weyl')
    with pytest.raises(DomainError):
        BracketSpec(('a1',), max_order=2)
    spec = BracketSpec.from_name('truncated_moyal', 1)
    assert spec.max_order == 2
    assert spec.weight(2).is_zero()

from kamodo_phasespace.algebra import BracketSpec, PhaseExpr, gmb, poisson, \
    check_zero_orderwise, liouvillian_product
from kamodo_phasespace.algebra.hamiltonians import conserved_quantities, \
    angular_momentum, five_step_inputs, five_step_coefficient, \
    drive_generator, effective_hamiltonian, hydrogen_hamiltonian, \
    hamiltonian_catalog, invariants, named_expression
from kamodo_phasespace.models.field import commutator_G
import pytest

quantities = conserved_quantities()


@pytest.mark.parametrize('name', sorted(quantities))
def test_hydrogen_invariants_commute_orderwise(name):
    H = quantities['hydrogen']
    assert all(check_zero_orderwise(H, quantities[name], 3))


def test_angular_momentum_algebra():
    L1, L2, L3 = angular_momentum()
    assert poisson(L1, L2) == L3
    assert gmb(L2, L3, BracketSpec.moyal(3)) == L1


def test_hamiltonian_with_units():
    H = hydrogen_hamiltonian('mu', 'kappa')
    assert H == PhaseExpr.parse('(p1^2 + p2^2 + p3^2)/(2*mu) - kappa/r')


def test_five_step_coefficient():
    steps, target = five_step_inputs(5)
    product = liouvillian_product(steps, target, BracketSpec.symbolic(1))
    assert five_step_coefficient(product) == 1728


def test_drive_commutator():
    G = commutator_G()
    assert G == drive_generator()
    assert G == PhaseExpr.parse('-2*eE*sin_wt*p3')
    H_eff = effective_hamiltonian()
    assert H_eff == PhaseExpr.parse('-2*eE*sin_wt*(q3 + t*p3)')


def test_catalog_builds_the_invariants():
    assert list(quantities) == invariants
    assert set(invariants) <= set(hamiltonian_catalog)
    assert quantities['L3'] == PhaseExpr.parse('q1*p2 - q2*p1')
    symbolic = conserved_quantities('mu', 'kappa')
    assert symbolic['hydrogen'] == hydrogen_hamiltonian('mu', 'kappa')
    assert named_expression('G') == drive_generator()
    assert named_expression('q1*p1') == PhaseExpr.parse('q1*p1')

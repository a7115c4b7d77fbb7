# -*- coding: utf-8 -*-
"""
Catalog of the phase-space functions used throughout the package, built as
exact PhaseExpr values. Internal units hbar = mu = kappa = 1 unless symbolic
names are requested.
"""
from kamodo_phasespace.algebra.phase_expr import PhaseExpr


def _coupling(mu, kappa):
    mu = PhaseExpr.one() if mu is None else PhaseExpr.coerce(mu)
    kappa = PhaseExpr.one() if kappa is None else PhaseExpr.coerce(kappa)
    return mu, kappa


def hydrogen_hamiltonian(mu=None, kappa=None):
    '''H = |p|^2/(2 mu) - kappa/r. mu and kappa default to 1; pass names
    ("mu", "kappa") to keep them symbolic.'''
    mu, kappa = _coupling(mu, kappa)
    kinetic = PhaseExpr.parse('(p1^2 + p2^2 + p3^2)/2') / mu
    return (kinetic - kappa*PhaseExpr.radial(-1)).canonical()


def angular_momentum():
    '''(L1, L2, L3) = q x p.'''
    return (PhaseExpr.parse('q2*p3 - q3*p2'),
            PhaseExpr.parse('q3*p1 - q1*p3'),
            PhaseExpr.parse('q1*p2 - q2*p1'))


def runge_lenz(mu=None, kappa=None):
    '''(A1, A2, A3) = p x L - mu kappa q/r.'''
    mu, kappa = _coupling(mu, kappa)
    L1, L2, L3 = angular_momentum()
    p1, p2, p3 = (PhaseExpr.var(name) for name in ('p1', 'p2', 'p3'))
    q1, q2, q3 = (PhaseExpr.var(name) for name in ('q1', 'q2', 'q3'))
    inv_r = PhaseExpr.radial(-1)
    return tuple((cross - mu*kappa*q*inv_r).canonical() for cross, q in
                 ((p2*L3 - p3*L2, q1), (p3*L1 - p1*L3, q2),
                  (p1*L2 - p2*L1, q3)))


def conserved_quantities(mu=None, kappa=None):
    '''Dict of the hydrogen invariants (H, L_i, A_i) built from
    hamiltonian_catalog.'''
    return {name: named_expression(name, mu, kappa) for name in invariants}


def anharmonic_hamiltonian(lam='lam'):
    '''p1^2/(2m) + m omega^2 q1^2/2 + lam m^2 omega^3/(2 hbar) q1^4 for one
    degree of freedom; lam may be a name, a number or a PhaseExpr.'''
    lam = PhaseExpr.param(lam) if isinstance(lam, str) else \
        PhaseExpr.coerce(lam)
    H0 = PhaseExpr.parse('p1^2/(2*m) + m*omega^2*q1^2/2')
    return (H0 + lam*PhaseExpr.parse('m^2*omega^3*q1^4/(2*hbar)')).canonical()


def five_step_inputs(n_steps=5):
    '''Steps [(H(t_k), t/n)] latest first, with symbolic lam1..lam_{n-1}
    and lam0 = 0, plus the target p1^2.'''
    weight = PhaseExpr.parse('t/n')
    steps = []
    for k in reversed(range(n_steps)):
        H = anharmonic_hamiltonian(f'lam{k}')
        if k == 0:
            H = H.subs({'lam0': 0})
        steps.append((H, weight))
    return steps, PhaseExpr.parse('p1^2')


def five_step_coefficient(product):
    '''Coefficient of a1 lam1 lam4 q1^2 t^4 n^-4 m^2 omega^6 in product.'''
    return product.coefficient(q=(2, 0, 0), params={
        'a1': 1, 'lam1': 1, 'lam4': 1, 't': 4, 'n': -4, 'm': 2, 'omega': 6})


def electric_hamiltonian():
    '''H_e = -2 eE sin(omega t) q3 with sin(omega t) kept as the formal
    symbol sin_wt.'''
    return PhaseExpr.parse('-2*eE*sin_wt*q3')


def drive_generator(mu=None):
    '''G = -(2 eE/mu) sin(omega t) p3.'''
    mu = PhaseExpr.one() if mu is None else PhaseExpr.coerce(mu)
    return (PhaseExpr.parse('-2*eE*sin_wt*p3') / mu).canonical()


def effective_hamiltonian(mu=None):
    '''H_eff = H_e + t G, linear in q and p.'''
    return (electric_hamiltonian() +
            PhaseExpr.param('t')*drive_generator(mu)).canonical()


# name: [description, units, builder(mu, kappa)]
hamiltonian_catalog = {
    'hydrogen': ['Coulomb Hamiltonian |p|^2/(2 mu) - kappa/r', 'E_h',
                 hydrogen_hamiltonian],
    'L1': ['angular momentum q2 p3 - q3 p2', 'hbar',
           lambda mu, kappa: angular_momentum()[0]],
    'L2': ['angular momentum q3 p1 - q1 p3', 'hbar',
           lambda mu, kappa: angular_momentum()[1]],
    'L3': ['angular momentum q1 p2 - q2 p1', 'hbar',
           lambda mu, kappa: angular_momentum()[2]],
    'A1': ['Runge-Lenz component (p x L - mu kappa q/r)_1', 'hbar^2/a0',
           lambda mu, kappa: runge_lenz(mu, kappa)[0]],
    'A2': ['Runge-Lenz component (p x L - mu kappa q/r)_2', 'hbar^2/a0',
           lambda mu, kappa: runge_lenz(mu, kappa)[1]],
    'A3': ['Runge-Lenz component (p x L - mu kappa q/r)_3', 'hbar^2/a0',
           lambda mu, kappa: runge_lenz(mu, kappa)[2]],
    'anharmonic': ['p^2/2m + m w^2 q^2/2 + lam m^2 w^3/(2 hbar) q^4',
                   'hbar omega', lambda mu, kappa: anharmonic_hamiltonian()],
    'electric': ['-2 eE sin(wt) q3', 'E_h',
                 lambda mu, kappa: electric_hamiltonian()],
    'G': ['-(2 eE/mu) sin(wt) p3', 'E_h',
          lambda mu, kappa: drive_generator(mu)],
    'H_eff': ['H_e + t G', 'E_h', lambda mu, kappa: effective_hamiltonian(mu)],
}
invariants = ['hydrogen', 'L1', 'L2', 'L3', 'A1', 'A2', 'A3']


def named_expression(name, mu=None, kappa=None):
    '''Catalog entry by name, or name parsed as an expression when it is
    not a catalog key.'''
    if name in hamiltonian_catalog:
        return hamiltonian_catalog[name][2](mu, kappa)
    return PhaseExpr.parse(name)

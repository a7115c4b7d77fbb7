# -*- coding: utf-8 -*-
"""
Generalized phase-space theory of the toy hydrogen atom: bracket algebra,
sawtooth spectral measures, Gaussian states, corrected 1-DOF dynamics,
electric-field excitation and Coulomb scattering. The model factories in
kamodo_phasespace.models wrap the results as Kamodo functions.
"""
__version__ = '0.1.0'

from kamodo_phasespace import algebra, models, runs  # noqa: F401
from kamodo_phasespace.errors import PhaseSpaceError, DomainError, \
    ConfigError, NumericalError, ConvergenceError, InstabilityError  # noqa

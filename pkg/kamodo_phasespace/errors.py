# -*- coding: utf-8 -*-
'''Exception classes shared by every kamodo_phasespace module.

DomainError derives from AttributeError so that code written against the
Kamodo readers (which raise AttributeError for unavailable variables and
bad choices) keeps catching it.
'''


class PhaseSpaceError(Exception):
    '''Base class for all errors raised by kamodo_phasespace.'''


class DomainError(PhaseSpaceError, AttributeError):
    '''Input outside the domain of an operation (bad energy, singular point,
    unbound symbol, expression outside the ring).'''


class ConfigError(DomainError):
    '''Missing, unknown or malformed configuration key.'''


class NumericalError(PhaseSpaceError, RuntimeError):
    '''A numerical procedure failed.'''


class ConvergenceError(NumericalError):
    '''Quadrature or root finding did not reach the requested tolerance.'''

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class InstabilityError(NumericalError):
    '''Time stepping blew up or leaked through the grid boundary.'''

    def __init__(self, message, time=None, step=None, growth=None):
        super().__init__(message)
        self.time = time
        self.step = step
        self.growth = growth

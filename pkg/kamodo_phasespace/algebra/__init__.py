# -*- coding: utf-8 -*-
from kamodo_phasespace.algebra.phase_expr import PhaseExpr, symbols
from kamodo_phasespace.algebra.bracket import (
    BracketSpec, d_omega_pow, poisson, gmb, check_zero_orderwise,
    liouvillian_product, truncation_complete, jacobiator, leibniz_defect,
    evaluate, moyal_coefficient)
from kamodo_phasespace.algebra.adjoint import adjointness_check

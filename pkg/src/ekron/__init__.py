"""Higher Euler-Kronecker constants of number fields.

The r-th constant gamma_{K,r} is the coefficient of (s-1)^r in the Laurent
expansion of zeta_K'/zeta_K at s=1. ``ekron`` computes it by several
independent routes and derives Li coefficients, Dedekind Stieltjes
constants and bound diagnostics from it.
"""
from .arithmetic_stream import CoeffStream, PhiValue, delta, ideal_count_stream, lambda_stream, phi
from .ek_core import (
    BoundReport,
    DedekindStieltjes,
    LiCoefficient,
    ZeroTable,
    bundled_zeta_zeros,
    ek_dirichlet,
    ek_ihara,
    ek_integral,
    ek_zero_sum,
    grh_bound,
    li_coefficient,
    load_zero_table,
    stieltjes_dedekind,
    uncond_scale,
)
from .laurent_engine import EKEstimate, LaurentRequest, coeff_partial, extrapolate, integral_route
from .number_fields import (
    FieldSpec,
    LocalSplitting,
    SplittingTable,
    field_from_cyclotomic,
    field_from_quadratic,
    field_rational,
    load_splitting_table,
    split_prime,
)
from .special_functions import EULER_GAMMA, f_recursive, gamma_tilde_deriv, polygamma_at, zeta_value

__version__ = "0.1.0"

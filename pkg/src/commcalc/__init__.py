"""Functional calculus for the commutator and anticommutator operators of symmetric matrices.

Bivariate functions of the left/right multiplication pair, Fréchet
derivatives of matrix functions in several equivalent forms, closed forms
for d <= 3, and material-point continuum-mechanics tools built on them.
"""

from .calculus import (ac, ad, apply_anticommutator_function, apply_bivariate, apply_commutator_function,
                       apply_symbol, apply_vandermonde, invert_operator, symbol_matrix, symbol_signs,
                       vandermonde_representation)
from .closed_form import apply_closed_form, eigenvalues_closed_form, invariants_3d, log_2x2, theta_fast_path_2d
from .derivatives import (EXP_VARIANTS, LOG_VARIANTS, POWER_VARIANTS, TRIG_HYP_VARIANTS, chain_rule_commutator,
                          derivative, derivative_exp, derivative_log, derivative_power, derivative_trig_hyp,
                          dlog_applied, dlog_half_sandwich, dlog_symmetric_product, dpower_applied,
                          frechet_derivative, hadamard_identity)
from .estimators import CommutatorFunction, MatrixDerivative
from .exceptions import (CommCalcError, DecompositionError, IntegrationError, MultiplicityError,
                         NotPositiveDefiniteError, NotSymmetricError, PreconditionError, SeriesDivergenceError,
                         SingularOperatorError, UndefinedValueError, UnsupportedDimensionError)
from .functions import BUILTIN_NAMES, ScalarFn1, ScalarFn2, builtin, custom, divided_difference, odd_even_split
from .spectral import SpectralDecomp, cluster_eigenvalues, is_positive_definite, matrix_function, schur_decompose

__all__ = [
    "BUILTIN_NAMES", "CommCalcError", "CommutatorFunction", "DecompositionError", "EXP_VARIANTS",
    "IntegrationError", "LOG_VARIANTS", "MatrixDerivative", "MultiplicityError", "NotPositiveDefiniteError",
    "NotSymmetricError", "POWER_VARIANTS", "PreconditionError", "ScalarFn1", "ScalarFn2", "SeriesDivergenceError",
    "SingularOperatorError", "SpectralDecomp", "TRIG_HYP_VARIANTS", "UndefinedValueError",
    "UnsupportedDimensionError", "ac", "ad", "apply_anticommutator_function", "apply_bivariate",
    "apply_closed_form", "apply_commutator_function", "apply_symbol", "apply_vandermonde", "builtin",
    "chain_rule_commutator", "cluster_eigenvalues", "custom", "derivative", "derivative_exp", "derivative_log",
    "derivative_power", "derivative_trig_hyp", "divided_difference", "dlog_applied", "dlog_half_sandwich",
    "dlog_symmetric_product", "dpower_applied", "eigenvalues_closed_form", "frechet_derivative",
    "hadamard_identity", "invariants_3d", "invert_operator", "is_positive_definite", "log_2x2", "matrix_function",
    "odd_even_split", "schur_decompose", "symbol_matrix", "symbol_signs", "theta_fast_path_2d",
    "vandermonde_representation",
]

__version__ = "0.1.0"

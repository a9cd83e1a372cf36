"""Continuum-mechanics applications at a material point."""

from .identities import (dissipation_compare, dissipation_tail_bound, ft_st_residuals, logconv_gap,
                         monotonicity_representation, rate_conversion_residual, sobolev_delta_form,
                         sobolev_identity)
from .kinematics import (FlowKinematics, FlowProtocol, generalized_spin, log_rate, log_spin, parse_flow,
                         upper_convected_rate)
from .models import COMPANION, MODELS, MaterialState, Trajectory, constitutive_rhs, integrate

__all__ = [
    "FlowKinematics", "FlowProtocol", "MaterialState", "Trajectory", "MODELS", "COMPANION",
    "generalized_spin", "log_spin", "log_rate", "upper_convected_rate", "parse_flow",
    "constitutive_rhs", "integrate", "rate_conversion_residual", "ft_st_residuals",
    "monotonicity_representation", "sobolev_identity", "sobolev_delta_form", "logconv_gap",
    "dissipation_compare", "dissipation_tail_bound",
]

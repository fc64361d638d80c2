"""Integrals of sinc_{p,q}: Dirichlet-type values, identities, asymptotics."""
from .asymptotics import (
    CLASSICAL_C2,
    AsymptoticModel,
    FitInstabilityWarning,
    Gamma2Estimate,
    I_pq,
    asymptotic_model,
    ball_inequality_scan,
    convexity_threshold,
    estimate_gamma2,
    limit_I,
    one_over_m_coefficient,
)
from .dirichlet import (
    SlowConvergenceWarning,
    check_divergence_constant,
    check_schwarz,
    divergence_constant,
    divergence_partial_sums,
    signed_sinc_integral,
    sinc_power_integral_direct,
    sinc_power_integral_transform,
    wolstenholme,
)
from .identities import (
    bhayo_vuorinen_check,
    check_theorem21,
    multiple_angle_residual,
    rem2_integral,
    theorem21_sides,
)
from .kernels import kernel_L, kernel_L_series, kernel_weight
from .reports import VerificationReport

__all__ = [
    "CLASSICAL_C2",
    "AsymptoticModel",
    "FitInstabilityWarning",
    "Gamma2Estimate",
    "I_pq",
    "SlowConvergenceWarning",
    "VerificationReport",
    "asymptotic_model",
    "ball_inequality_scan",
    "bhayo_vuorinen_check",
    "check_divergence_constant",
    "check_schwarz",
    "check_theorem21",
    "convexity_threshold",
    "divergence_constant",
    "divergence_partial_sums",
    "estimate_gamma2",
    "kernel_L",
    "kernel_L_series",
    "kernel_weight",
    "limit_I",
    "multiple_angle_residual",
    "one_over_m_coefficient",
    "rem2_integral",
    "signed_sinc_integral",
    "sinc_power_integral_direct",
    "sinc_power_integral_transform",
    "theorem21_sides",
    "wolstenholme",
]

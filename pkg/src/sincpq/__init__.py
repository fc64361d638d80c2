"""Generalised trigonometric functions sin_{p,q} and their sinc integrals."""
from .errors import ConvergenceError, DomainError, IntegrandError, PoleError
from .gentrig import (
    PQParams,
    SeriesCoeffs,
    arcsin_pq,
    cos_pq,
    make_params,
    ode_residual,
    one_minus_cos_pq,
    series_coeffs,
    sin_pq,
    sinc_pq,
    tan_pq,
)
from .quadrature import (
    DEFAULT_TOL,
    SIGNED,
    AbsolutePower,
    QuadResult,
    Signed,
    integrate,
    integrate_oscillatory,
    wynn_epsilon,
)

__version__ = "0.1.0"

__all__ = [
    "AbsolutePower",
    "ConvergenceError",
    "DEFAULT_TOL",
    "DomainError",
    "IntegrandError",
    "PQParams",
    "PoleError",
    "QuadResult",
    "SIGNED",
    "SeriesCoeffs",
    "Signed",
    "arcsin_pq",
    "cos_pq",
    "integrate",
    "integrate_oscillatory",
    "make_params",
    "ode_residual",
    "one_minus_cos_pq",
    "series_coeffs",
    "sin_pq",
    "sinc_pq",
    "tan_pq",
    "wynn_epsilon",
]

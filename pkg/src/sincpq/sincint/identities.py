"""Multiple-angle identity, its integral form, and the sandwich bound on arcsin_pq."""
from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import DomainError
from ..gentrig import PQParams, arcsin_pq, cos_pq, make_params, one_minus_cos_pq, sin_pq, sinc_pq
from ..quadrature import DEFAULT_TOL, SIGNED, AbsolutePower, QuadResult, integrate_oscillatory
from .reports import VerificationReport, equality_report

__all__ = [
    "multiple_angle_residual",
    "theorem21_sides",
    "check_theorem21",
    "rem2_integral",
    "bhayo_vuorinen_check",
]


def _conjugate(q: float) -> float:
    if not q > 1:
        raise DomainError(f"q must exceed 1, got {q}")
    return q / (q - 1.0)


def multiple_angle_residual(q: float, x):
    """``sin_{2,q}(2^(2/q) x) - 2^(2/q) sin_{q*,q}(x) |cos_{q*,q}(x)|^(q*-2) cos_{q*,q}(x)``."""
    qs = _conjugate(q)
    scale = 2.0 ** (2.0 / q)
    inner = make_params(qs, q)
    s = sin_pq(inner, x)
    c = cos_pq(inner, x)
    # |c|^(q*-2) c written so that c = 0 gives 0 for every q*
    rhs = scale * s * np.sign(c) * np.abs(c) ** (qs - 1.0)
    return sin_pq(make_params(2.0, q), scale * np.asarray(x, dtype=float)) - rhs


def theorem21_sides(q: float, tol: float = DEFAULT_TOL, *, max_periods: int = 10_000):
    """Both sides of the integral multiple-angle identity.

    Left: ``int_0^inf |sinc_{q*,q}|^q``.  Right: ``(q*/2^(2/q)) int_0^inf
    |sinc_{2,q}|^(q-2) sinc_{2,q}``.
    """
    qs = _conjugate(q)
    left_p = make_params(qs, q)
    right_p = make_params(2.0, q)
    factor = qs / 2.0 ** (2.0 / q)
    if q < 2:
        warnings.warn(
            f"q={q} < 2: right-hand weight |sinc|^{q - 2:g} is handled by the signed engine",
            RuntimeWarning,
            stacklevel=2,
        )

    def lhs_f(x):
        return np.abs(sinc_pq(left_p, x)) ** q

    def rhs_f(x):
        s = sinc_pq(right_p, x)
        return np.sign(s) * np.abs(s) ** (q - 1.0)

    lhs = integrate_oscillatory(lhs_f, left_p.pi_pq, tol, AbsolutePower(q), max_periods=max_periods)
    rhs = integrate_oscillatory(rhs_f, right_p.pi_pq, tol / factor, SIGNED, max_periods=max_periods)
    rhs = QuadResult(
        factor * rhs.value,
        factor * rhs.abs_error_estimate,
        rhs.evaluations,
        rhs.converged,
        rhs.periods_used,
        rhs.notes,
    )
    return lhs, rhs


def check_theorem21(q: float, tol: float = 1e-7, *, max_periods: int = 10_000) -> VerificationReport:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lhs, rhs = theorem21_sides(q, 0.01 * tol, max_periods=max_periods)
    return equality_report(
        "multiple_angle_integral",
        lhs.value,
        rhs.value,
        tol,
        lhs.abs_error_estimate + rhs.abs_error_estimate,
        q=q,
        lhs_periods=lhs.periods_used,
        rhs_periods=rhs.periods_used,
    )


def _rem2_integrand(params: PQParams):
    q, p = params.q, params.p

    def f(x):
        # (1 - cos)/x^q = [(1 - cos)/|sin|^q] |sinc|^q keeps the origin finite
        s = np.abs(sin_pq(params, x)) ** q
        omc = one_minus_cos_pq(params, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(s > 0, omc / s, 1.0 / p)
            small = np.abs(sinc_pq(params, x)) ** q
            big = omc / np.abs(x) ** q
        # the ratio form breaks down where sin vanishes away from the origin
        return np.where(np.abs(x) < params.half_period, ratio * small, big)

    return f


def rem2_integral(q: float, tol: float = DEFAULT_TOL, *, max_periods: int = 100_000) -> QuadResult:
    """``2^(1-2/q) int_0^inf (1 - cos_{2,q} x) / x^q dx``.

    The integrand tends to 1/2 at the origin and is bounded by ``2 / x^q``;
    panels span a full period of cos_{2,q} split at its quarter points.
    """
    if not q > 1:
        raise DomainError(f"q must exceed 1, got {q}")
    params = make_params(2.0, q)
    factor = 2.0 ** (1.0 - 2.0 / q)
    res = integrate_oscillatory(
        _rem2_integrand(params),
        params.period,
        tol / factor,
        AbsolutePower(q, envelope=2.0),
        splits=4,
        max_periods=max_periods,
    )
    return QuadResult(
        factor * res.value,
        factor * res.abs_error_estimate,
        res.evaluations,
        res.converged,
        res.periods_used,
        dict(res.notes, method="rem2"),
    )


def bhayo_vuorinen_check(params: PQParams, y: float) -> VerificationReport:
    """``(1 - y^q)^(1/(p(q+1))) < y / arcsin_pq(y) < (1 + y^q / (p(q+1)))^-1``."""
    if not 0 < y < 1:
        raise DomainError(f"y must lie in (0, 1), got {y}")
    k = params.p * (params.q + 1.0)
    yq = y ** params.q
    lower = math.exp(math.log1p(-yq) / k)
    middle = y / arcsin_pq(params, y)
    upper = 1.0 / (1.0 + yq / k)
    passed = lower < middle < upper
    return VerificationReport(
        "bhayo_vuorinen",
        middle,
        upper,
        abs(upper - middle),
        0.0,
        passed,
        "between",
        {"lower": lower, "p": params.p, "q": params.q, "y": y,
         "lower_margin": middle - lower, "upper_margin": upper - middle},
    )

"""Integrals of powers of sinc_{p,q} over the half line.

Two independent routes are provided for ``int_0^inf sinc_pq^r``:

* ``sinc_power_integral_transform`` folds the half line onto ``(0, 1)``
  with the lattice kernel ``L_r`` and integrates once;
* ``sinc_power_integral_direct`` sums panel integrals between consecutive
  zeros and accelerates the partial sums.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np

from ..errors import ConvergenceError, DomainError
from ..gentrig import PQParams, sin_pq, sinc_pq
from ..quadrature import (
    DEFAULT_TOL,
    SIGNED,
    AbsolutePower,
    QuadResult,
    integrate,
    integrate_oscillatory,
)
from ..special import BetaArgs, beta
from .kernels import kernel_weight
from .reports import VerificationReport, equality_report, inequality_report

__all__ = [
    "SlowConvergenceWarning",
    "sinc_power_integral_transform",
    "sinc_power_integral_direct",
    "signed_sinc_integral",
    "check_schwarz",
    "divergence_constant",
    "check_divergence_constant",
    "divergence_partial_sums",
    "wolstenholme",
]

# relative accuracy floor for signed integrals with exponent below one
SLOW_RELATIVE_TOL = 1e-6


class SlowConvergenceWarning(RuntimeWarning):
    pass


def _ratio(params: PQParams, t):
    """``sin_pq(pi_pq t) / sin(pi t)``, continuous at ``t = 0``."""
    pi_pq = params.pi_pq
    return pi_pq * sinc_pq(params, pi_pq * t) / (math.pi * np.sinc(t))


def sinc_power_integral_transform(params: PQParams, r: int, tol: float = DEFAULT_TOL) -> QuadResult:
    """``int_0^inf sinc_pq^r`` via ``(1 / (2 pi_pq^(r-1))) int_0^1 sin_pq^r(pi_pq t) L_r(t) dt``.

    The integrand is rewritten as ``ratio(t)^r * sin(pi t)^r L_r(t)``, both
    factors bounded, and folded onto ``[0, 1/2]`` by its symmetry about
    ``t = 1/2``.  Orders above 4 use the series form of the kernel.
    """
    if int(r) != r or r < 1:
        raise DomainError(f"transform needs a positive integer power, got {r}")
    r = int(r)
    scale = 1.0 / params.pi_pq ** (r - 1)

    def f(t):
        return _ratio(params, t) ** r * kernel_weight(r, t)

    res = integrate(f, 0.0, 0.5, tol / scale)
    return QuadResult(
        res.value * scale,
        res.abs_error_estimate * scale,
        res.evaluations,
        res.converged,
        0,
        {"method": "transform", "kernel": "closed" if r <= 4 else "series"},
    )


def sinc_power_integral_direct(
    params: PQParams, r: int, tol: float = DEFAULT_TOL, *, max_periods: int = 10_000
) -> QuadResult:
    """``int_0^inf sinc_pq^r`` by panel summation between the zeros ``n pi_pq``.

    Odd powers alternate in sign (epsilon acceleration); even powers are
    nonnegative and use the ``absolute_power(r)`` tail extrapolation.
    """
    if int(r) != r or r < 1:
        raise DomainError(f"direct path needs a positive integer power, got {r}")
    r = int(r)

    def f(x):
        return sinc_pq(params, x) ** r

    mode = SIGNED if r % 2 else AbsolutePower(r)
    res = integrate_oscillatory(f, params.pi_pq, tol, mode, max_periods=max_periods)
    res.notes["method"] = "direct"
    return res


def signed_sinc_integral(
    params: PQParams, r: float, tol: float = DEFAULT_TOL, *, max_periods: int = 10_000
) -> QuadResult:
    """``int_0^inf |sinc_pq|^(r-1) sinc_pq`` for ``r > 0`` (conditionally convergent).

    For ``r < 1`` a SlowConvergenceWarning is issued and the tolerance is
    relaxed to ``SLOW_RELATIVE_TOL``.
    """
    if not r > 0:
        raise DomainError(f"signed sinc integral needs r > 0, got {r}")
    if r < 1:
        warnings.warn(
            f"r={r} < 1: panels decay like n^-{r}; accuracy capped at {SLOW_RELATIVE_TOL:g}",
            SlowConvergenceWarning,
            stacklevel=2,
        )
        tol = max(tol, SLOW_RELATIVE_TOL)

    def f(x):
        s = sinc_pq(params, x)
        return np.sign(s) * np.abs(s) ** r

    res = integrate_oscillatory(f, params.pi_pq, tol, SIGNED, max_periods=max_periods)
    res.notes["method"] = "signed"
    return res


def check_schwarz(params: PQParams, tol: float = 1e-8) -> VerificationReport:
    """``(int sinc_pq)^2 <= (pi_pq / 2) int sinc_pq^2``, equality only at (2, 2)."""
    one = sinc_power_integral_transform(params, 1, 0.1 * tol)
    two = sinc_power_integral_transform(params, 2, 0.1 * tol)
    lhs = one.value ** 2
    rhs = params.half_period * two.value
    return inequality_report(
        "schwarz",
        lhs,
        rhs,
        tol,
        p=params.p,
        q=params.q,
        equality=abs(rhs - lhs) <= tol,
    )


def divergence_constant(params: PQParams) -> float:
    """``C = 2 B(2/q, 1/p*) / (q pi_pq)``, the mean of sin_pq over a half period."""
    return 2.0 * beta(BetaArgs(2.0 / params.q, 1.0 / params.p_star)) / (params.q * params.pi_pq)


def check_divergence_constant(params: PQParams, tol: float = 1e-9) -> VerificationReport:
    """Compare ``int_0^{pi_pq} sin_pq`` with ``C pi_pq``."""
    c = divergence_constant(params)
    h = params.half_period
    res = integrate(lambda x: sin_pq(params, x), 0.0, h, 0.1 * tol)
    return equality_report(
        "divergence_constant",
        2.0 * res.value,
        c * params.pi_pq,
        tol,
        2.0 * res.abs_error_estimate,
        C=c,
    )


def divergence_partial_sums(params: PQParams, n_panels: int = 100, tol: float = DEFAULT_TOL):
    """Run the ``absolute_power(1)`` engine on ``|sinc_pq|`` for ``n_panels`` panels.

    The integral diverges, so the engine must give up; returns
    ``(partial_sums, harmonic_lower_bound)`` where the bound is ``C H_n``.
    """

    def f(x):
        return np.abs(sinc_pq(params, x))

    try:
        integrate_oscillatory(f, params.pi_pq, tol, AbsolutePower(1.0), max_periods=n_panels)
    except ConvergenceError as exc:
        sums = np.asarray(exc.result.notes["partial_sums"])
    else:  # pragma: no cover - the engine must not report convergence here
        raise AssertionError("absolute_power(1) integration of |sinc| reported convergence")
    c = divergence_constant(params)
    harmonic = np.cumsum(1.0 / np.arange(1, sums.size + 1))
    return sums, c * harmonic


def wolstenholme(n: int) -> float:
    """Closed form of ``int_0^inf (sin x / x)^n dx`` for integer ``n >= 1``.

    The rational factor is summed exactly with Python integers.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"wolstenholme needs an integer n >= 1, got {n}")
    n = int(n)
    acc = sum((-1) ** k * math.comb(n, k) * (n - 2 * k) ** (n - 1) for k in range(n // 2 + 1))
    return float(Fraction(acc, math.factorial(n - 1) * 2 ** n)) * math.pi

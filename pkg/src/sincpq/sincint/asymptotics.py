"""Large-m behaviour of ``I_pq(m) = m^(1/q) int_0^inf |sinc_pq|^m``."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError
from ..gentrig import PQParams, make_params, series_coeffs, sinc_pq
from ..quadrature import DEFAULT_TOL, AbsolutePower, QuadResult, integrate, integrate_oscillatory
from ..special import gamma
from .reports import VerificationReport

__all__ = [
    "FitInstabilityWarning",
    "AsymptoticModel",
    "Gamma2Estimate",
    "I_pq",
    "asymptotic_model",
    "one_over_m_coefficient",
    "limit_I",
    "convexity_threshold",
    "ball_inequality_scan",
    "estimate_gamma2",
    "CLASSICAL_C2",
]

CLASSICAL_C2 = -math.sqrt(1.5 * math.pi) * 13.0 / 1120.0
BALL_BOUND = math.pi / math.sqrt(2.0)


class FitInstabilityWarning(RuntimeWarning):
    pass


def _power_abs_sinc(params: PQParams, m: float):
    def f(x):
        s = np.abs(sinc_pq(params, x))
        with np.errstate(divide="ignore"):
            return np.where(s > 0, np.exp(m * np.log(s)), 0.0)

    return f


def I_pq(params: PQParams, m: float, tol: float = DEFAULT_TOL, *, alpha: float = 1.0,
         max_periods: int = 100_000) -> QuadResult:
    """``m^(1/q) int_0^inf |sinc_pq(x)|^m dx`` for ``m > 1``.

    The half line is split into a head ``[0, alpha]``, a bridge up to the
    next zero of sinc_pq, and a periodic tail.  The tail is dropped when
    ``int_X^inf x^-m`` is already below the tolerance.
    """
    if not m > 1:
        raise DomainError(f"I_pq needs m > 1, got {m}")
    if not alpha > 0:
        raise DomainError(f"head cutoff must be positive, got {alpha}")
    scale = m ** (1.0 / params.q)
    t = tol / scale
    f = _power_abs_sinc(params, m)
    head = integrate(f, 0.0, alpha, t / 3.0)
    x_tail = math.ceil(alpha / params.pi_pq) * params.pi_pq
    parts = [head]
    if x_tail > alpha:
        parts.append(integrate(f, alpha, x_tail, t / 3.0))
    bound = x_tail ** (1.0 - m) / (m - 1.0)
    if bound > 1e-3 * t:
        parts.append(
            integrate_oscillatory(f, params.pi_pq, t / 3.0, AbsolutePower(m), offset=x_tail,
                                  max_periods=max_periods)
        )
        tail_note = "oscillatory"
    else:
        tail_note = "truncated"
    value = sum(r.value for r in parts)
    err = sum(r.abs_error_estimate for r in parts) + (bound if tail_note == "truncated" else 0.0)
    return QuadResult(
        scale * value,
        scale * err,
        sum(r.evaluations for r in parts),
        all(r.converged for r in parts),
        parts[-1].periods_used if tail_note == "oscillatory" else 0,
        {"alpha": alpha, "tail": tail_note, "head": scale * head.value},
    )


def one_over_m_coefficient(p: float, q: float) -> float:
    """``K`` in ``I ~ L (1 - K/m)``; changes sign at the convexity threshold."""
    return (q + 1.0) * (p * q * q + 2.0 * p * q - 3.0 * q * q + p - 2.0 * q) / (
        2.0 * q * q * (2.0 * q + 1.0)
    )


@dataclass(frozen=True)
class AsymptoticModel:
    """Laplace-method data for ``I_pq``.

    ``f0, f1`` are the first coefficients of ``-log sinc_pq`` in powers of
    ``x^q``; ``lam = 1/q`` and ``mu = 1`` are the exponents of the amplitude
    and phase.  ``gamma0, gamma1`` use the closed forms.
    """

    params: PQParams
    lam: float
    mu: float
    f0: float
    f1: float
    gamma0: float
    gamma1: float
    classical_c2_target: Optional[float] = None

    @property
    def gamma1_from_phase(self) -> float:
        """``gamma1`` rebuilt from ``f0, f1`` (unit amplitude)."""
        return -(self.lam + 1.0) * self.f1 / self.f0 * self.f0 ** (-(self.lam + 1.0) / self.mu) / self.mu ** 2

    @property
    def leading(self) -> float:
        q = self.params.q
        return gamma(1.0 / q) * self.gamma0 / q

    @property
    def first_order(self) -> float:
        """Coefficient of ``1/m``: ``Gamma(1 + 1/q) gamma1 / q``."""
        q = self.params.q
        return gamma(1.0 + 1.0 / q) * self.gamma1 / q

    def tilde_I(self, m):
        """Two-term model ``L (1 - K/m)``."""
        m = np.asarray(m, dtype=float)
        out = self.leading + self.first_order / m
        return float(out) if out.ndim == 0 else out


def asymptotic_model(params: PQParams) -> AsymptoticModel:
    p, q = params.p, params.q
    sc = series_coeffs(params, 2)
    a1, a2 = sc.a[1], sc.a[2]
    f0 = -a1
    f1 = -a2 + 0.5 * a1 * a1
    g0 = (p * (q + 1.0)) ** (1.0 / q)
    g1 = -g0 * (q + 1.0) * (p * q * q + 2.0 * p * q - 3.0 * q * q + p - 2.0 * q) / (2.0 * q * (2.0 * q + 1.0))
    c2 = CLASSICAL_C2 if (p, q) == (2.0, 2.0) else None
    return AsymptoticModel(params, 1.0 / q, 1.0, f0, f1, g0, g1, c2)


def limit_I(params: PQParams) -> float:
    q = params.q
    return gamma(1.0 / q) * (params.p * (q + 1.0)) ** (1.0 / q) / q


def convexity_threshold(q: float) -> float:
    """``q(3q+2)/(q+1)^2``: below it the two-term model decreases in ``m``."""
    if not q > 1:
        raise DomainError(f"q must exceed 1, got {q}")
    return q * (3.0 * q + 2.0) / (q + 1.0) ** 2


def ball_inequality_scan(m_grid: Sequence[float], tol: float = 1e-8) -> VerificationReport:
    """``I_{2,2}(m) <= pi / sqrt(2)`` over ``m_grid`` (all ``m >= 2``)."""
    grid = [float(m) for m in m_grid]
    if not grid or min(grid) < 2:
        raise DomainError("Ball scan needs a nonempty grid with every m >= 2")
    params = make_params(2.0, 2.0)
    results = [I_pq(params, m, 0.01 * tol) for m in grid]
    values = [r.value for r in results]
    k = int(np.argmax(values))
    quad = results[k].abs_error_estimate
    return VerificationReport(
        "ball_inequality",
        values[k],
        BALL_BOUND,
        abs(values[k] - BALL_BOUND),
        tol,
        values[k] <= BALL_BOUND + tol,
        "le",
        {"argmax_m": grid[k], "m_grid": grid, "values": values, "quad_error": quad},
    )


@dataclass(frozen=True)
class Gamma2Estimate:
    """Fitted ``1/m^2`` coefficient of ``I_pq`` and the implied ``gamma2``.

    ``c2 = Gamma(2 + 1/q) gamma2 / q``.  Fitted values, not closed forms.
    """

    c2: float
    c2_uncertainty: float
    gamma2: float
    gamma2_uncertainty: float
    m_grid: tuple
    scaled_residuals: tuple = field(default=())


def estimate_gamma2(params: PQParams, m_grid: Sequence[float] = (200, 400, 800, 1600, 3200),
                    tol: float = 1e-11) -> Gamma2Estimate:
    """Weighted least squares of ``m^2 (I - tilde_I) = c2 + c3/m + c4/m^2``."""
    grid = np.asarray(sorted(float(m) for m in m_grid))
    if grid.size < 4:
        raise DomainError("estimate_gamma2 needs at least 4 values of m")
    model = asymptotic_model(params)
    res = [I_pq(params, m, tol) for m in grid]
    y = grid ** 2 * (np.array([r.value for r in res]) - model.tilde_I(grid))
    sigma = grid ** 2 * np.maximum([r.abs_error_estimate for r in res], 1e-15)
    design = np.stack([np.ones_like(grid), 1.0 / grid, 1.0 / grid ** 2], axis=1)
    w = 1.0 / sigma
    coef, *_ = np.linalg.lstsq(design * w[:, None], y * w, rcond=None)
    resid = y - design @ coef
    dof = grid.size - 3
    scale2 = max(float(np.sum((resid * w) ** 2)) / dof, 1.0)
    cov = np.linalg.inv((design * w[:, None]).T @ (design * w[:, None])) * scale2
    c2, dc2 = float(coef[0]), float(math.sqrt(cov[0, 0]))
    if dc2 > 0.1 * abs(c2):
        warnings.warn(
            f"gamma2 fit is noise dominated (c2={c2:.3g} +/- {dc2:.2g})", FitInstabilityWarning, stacklevel=2
        )
    conv = params.q / gamma(2.0 + 1.0 / params.q)
    return Gamma2Estimate(c2, dc2, c2 * conv, dc2 * conv, tuple(grid.tolist()), tuple(resid.tolist()))

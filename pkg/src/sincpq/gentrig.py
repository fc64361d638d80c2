"""Generalised trigonometric functions sin_{p,q}, cos_{p,q}, tan_{p,q}, sinc_{p,q}.

``sin_{p,q}`` is the inverse of ``F(y) = int_0^y (1 - t^q)^(-1/p) dt`` on
``[0, 1]``, extended to the real line by ``sin(pi_pq - x) = sin(x)``, oddness
and ``2 pi_pq`` periodicity.  All evaluators accept scalars or arrays.

On the quarter period the inversion is split in two branches so that both
``y = sin`` and ``z = 1 - y^q`` come out with full relative accuracy:

* small argument: Newton on ``F(y) = u`` in ``y``,
* near the peak: Newton on ``pi_pq/2 - F = d`` in ``w = z^(1/p*)``.

Each branch writes its integral as a leading power times ``1 + delta``
with ``delta`` a positive power series, so the Newton residual is formed as
``(x - target) + x delta`` with an exact first difference.  The incomplete
beta continued fraction remains as a fallback beyond the series range.
Both Newton maps are convex with a start on the right of the root, so the
iterates decrease monotonically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError
from .special import betacf

__all__ = [
    "PQParams",
    "SeriesCoeffs",
    "make_params",
    "arcsin_pq",
    "sin_pq",
    "cos_pq",
    "tan_pq",
    "sinc_pq",
    "one_minus_cos_pq",
    "series_coeffs",
    "ode_residual",
]

_EPS = np.finfo(float).eps
_MAX_NEWTON = 60
# F(y) = y (1 + delta(y^q)) is summed directly up to y^q = 2/3, which
# covers the whole small branch since its split is below 2/3 for p, q > 1
_SMALL_SERIES_MAX = 2.0 / 3.0
_SMALL_SERIES_TERMS = 110
# both branch series at y^q = 1/2 are below 1e-25 relative after this many terms
_HALF_PERIOD_TERMS = 90
# number of exact reversion coefficients used by the small-argument sinc path
_SINC_SERIES_ORDER = 30
_SERIES_SWITCH = 0.1


@dataclass(frozen=True)
class PQParams:
    """Validated parameter pair with the derived constants.

    ``half_period`` is ``pi_pq / 2`` (the first maximum of sin_{p,q}) and
    ``period`` is ``2 pi_pq``.
    """

    p: float
    q: float
    p_star: float = field(init=False)
    half_period: float = field(init=False)
    period: float = field(init=False)

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise DomainError(f"p and q must be finite, got ({p}, {q})")
        if p <= 1 or q <= 1:
            raise DomainError(f"p and q must exceed 1, got ({p}, {q})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p_star", p / (p - 1.0))
        half = _half_period(p, q)
        object.__setattr__(self, "half_period", half)
        object.__setattr__(self, "period", 4.0 * half)

    @property
    def pi_pq(self) -> float:
        """First positive zero of sin_{p,q}."""
        return 2.0 * self.half_period

    @property
    def a(self) -> float:
        # beta exponents of F after the substitution s = t^q
        return 1.0 / self.q

    @property
    def b(self) -> float:
        return 1.0 - 1.0 / self.p


def make_params(p: float, q: float) -> PQParams:
    return PQParams(p, q)


@lru_cache(maxsize=256)
def _half_period(p: float, q: float) -> float:
    """``pi_pq / 2 = B(1 - 1/p, 1/q) / q``, correctly rounded.

    Splits the integral at ``y^q = 1/2`` and sums the two positive series
    of the branch corrections in decimal arithmetic, so the result does not
    inherit the few-ulp error of ``exp(log B)``.
    """
    with localcontext() as ctx:
        ctx.prec = 40
        one = Decimal(1)
        dp, dq = Decimal(p), Decimal(q)
        a, b = one / dq, one - one / dp
        half = one / 2
        small = peak = one
        r_small = r_peak = one
        power = one
        for k in range(1, _HALF_PERIOD_TERMS + 1):
            r_small *= (one / dp + k - 1) / k
            r_peak *= (k - a) / k
            power *= half
            small += r_small * power / (dq * k + 1)
            peak += r_peak * b * power / (b + k)
        ln_half = half.ln()
        small *= (a * ln_half).exp()
        peak *= (b * ln_half).exp() / (dq * b)
        return float(small + peak)


@lru_cache(maxsize=256)
def _split(p: float, q: float):
    """Branch switch data: (y_split, w_split, u_split) for the pair."""
    a, b = 1.0 / q, 1.0 - 1.0 / p
    s_split = (a + 1.0) / (a + b + 2.0)
    y_split = s_split ** a
    z_split = 1.0 - s_split
    w_split = z_split ** b
    u_split = _forward_small(np.array([y_split]), a, b, q)[0]
    return y_split, w_split, float(u_split)


def _forward_small(y, a, b, q):
    # F(y) for y^q below the continued-fraction switch
    s = y ** q
    return y * (1.0 - s) ** b * betacf(s, a, b)


@lru_cache(maxsize=256)
def _branch_coeffs(p: float, q: float, peak: bool) -> np.ndarray:
    """Coefficients of the relative correction ``delta`` on either branch.

    Small branch: ``F(y) = y (1 + delta(y^q))``.  Peak branch:
    ``pi_pq/2 - F(y) = w (1 + delta(z)) / (q b)`` with ``z = 1 - y^q``.
    """
    a, b = 1.0 / q, 1.0 - 1.0 / p
    c = np.zeros(_SMALL_SERIES_TERMS + 1)
    rising = 1.0
    for k in range(1, _SMALL_SERIES_TERMS + 1):
        if peak:
            rising *= (k - a) / k
            c[k] = rising * b / (b + k)
        else:
            rising *= (1.0 / p + k - 1.0) / k
            c[k] = rising / (q * k + 1.0)
    return c


def _residual_small(v, target, p, q):
    # F(v) - target; below the series bound v - target is exact, so the
    # residual keeps accuracy beyond the last bit of F
    a, b = 1.0 / q, 1.0 - 1.0 / p
    s = v ** q
    out = np.empty_like(v)
    ser = s <= _SMALL_SERIES_MAX
    if np.any(ser):
        delta = np.polynomial.polynomial.polyval(s[ser], _branch_coeffs(p, q, False))
        out[ser] = (v[ser] - target[ser]) + v[ser] * delta
    if not np.all(ser):
        out[~ser] = _forward_small(v[~ser], a, b, q) - target[~ser]
    return out


def _forward_peak(w, a, b, q):
    # pi_pq/2 - F(y) as a function of w = (1 - y^q)^b
    z = w ** (1.0 / b)
    return w * (1.0 - z) ** a * betacf(z, b, a) / (q * b)


def _residual_peak(w, target, p, q):
    # q b (pi_pq/2 - F) - target as a function of w = (1 - y^q)^b
    a, b = 1.0 / q, 1.0 - 1.0 / p
    z = w ** (1.0 / b)
    out = np.empty_like(w)
    ser = z <= _SMALL_SERIES_MAX
    if np.any(ser):
        delta = np.polynomial.polynomial.polyval(z[ser], _branch_coeffs(p, q, True))
        out[ser] = (w[ser] - target[ser]) + w[ser] * delta
    if not np.all(ser):
        out[~ser] = q * b * _forward_peak(w[~ser], a, b, q) - target[~ser]
    return out


def _newton_decreasing(resid, dg, target, x0, hi):
    """Monotone Newton for convex increasing ``g`` started right of the root.

    ``resid(x, target)`` returns ``g(x) - target``.

    Iterates only on unconverged entries; an entry stops once its step is at
    rounding level or the iterate stops decreasing.
    """
    x = np.minimum(x0, hi).astype(float)
    idx = np.arange(x.size)
    cur = x.copy()
    tgt = np.asarray(target, dtype=float)
    for _ in range(_MAX_NEWTON):
        step = resid(cur, tgt) / dg(cur)
        nxt = np.clip(cur - step, 0.0, hi)
        done = (np.abs(step) <= 4.0 * _EPS * np.maximum(cur, _EPS)) | (nxt >= cur)
        x[idx] = np.where(done & (nxt > cur), cur, nxt)
        keep = ~done
        if not keep.any():
            break
        idx, cur, tgt = idx[keep], nxt[keep], tgt[keep]
    return x


def _quarter(params: PQParams, u, d):
    """Invert F on the quarter period.

    ``u`` is the argument in ``[0, pi_pq/2]`` and ``d = pi_pq/2 - u`` (both
    supplied so that neither is formed by cancellation).  Returns
    ``(y, z)`` with ``y = sin_{p,q}(u)`` and ``z = 1 - y^q``.
    """
    p, q = params.p, params.q
    a, b = params.a, params.b
    y_split, w_split, u_split = _split(p, q)
    y = np.empty_like(u)
    z = np.empty_like(u)
    small = u <= u_split
    if np.any(small):
        us = u[small]
        ys = _newton_decreasing(
            lambda v, t: _residual_small(v, t, p, q),
            lambda v: (1.0 - v ** q) ** (-1.0 / p),
            us,
            us,
            y_split,
        )
        y[small] = ys
        z[small] = 1.0 - ys ** q
    peak = ~small
    if np.any(peak):
        dp = d[peak]
        wp = _newton_decreasing(
            lambda v, t: _residual_peak(v, t, p, q),
            lambda v: (1.0 - v ** (1.0 / b)) ** (a - 1.0),
            q * b * dp,
            q * b * dp,
            w_split,
        )
        zp = wp ** (1.0 / b)
        z[peak] = zp
        y[peak] = np.exp(np.log1p(-zp) / q)
    return y, z


def _reduce(params: PQParams, x):
    """Reduce to the quarter period.

    Returns ``(u, d, sin_sign, cos_sign)``.  ``fmod`` is exact, so the only
    loss at large ``|x|`` comes from the double rounding of ``2 pi_pq``.
    """
    h = params.half_period
    pi_pq = params.pi_pq
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("generalised trigonometric functions need finite x")
    s_sign = np.where(x < 0, -1.0, 1.0)
    r = np.fmod(np.abs(x), params.period)
    shift = r >= pi_pq
    r = np.where(shift, r - pi_pq, r)
    s_sign = np.where(shift, -s_sign, s_sign)
    c_sign = np.where(shift, -1.0, 1.0)
    refl = r > h
    c_sign = np.where(refl, -c_sign, c_sign)
    u = np.where(refl, pi_pq - r, r)
    d = np.abs(r - h)
    u = np.clip(u, 0.0, h)
    return u, d, s_sign, c_sign


def _evaluate(params: PQParams, x):
    """Return ``(sin, z, cos_sign)`` with ``z = 1 - |sin|^q`` accurate."""
    u, d, s_sign, c_sign = _reduce(params, x)
    shape = u.shape
    y, z = _quarter(params, u.reshape(-1), d.reshape(-1))
    return s_sign * y.reshape(shape), z.reshape(shape), c_sign


def _out(v, like):
    return float(v) if np.ndim(like) == 0 else v


def arcsin_pq(params: PQParams, x):
    """``F_{p,q}(x) = int_0^x (1 - t^q)^(-1/p) dt`` for ``x in [0, 1]``."""
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any((xa < 0) | (xa > 1)):
        raise DomainError("arcsin_pq requires 0 <= x <= 1")
    a, b, q = params.a, params.b, params.q
    s = xa ** q
    s_split = (a + 1.0) / (a + b + 2.0)
    out = np.empty_like(xa)
    low = s <= s_split
    out[low] = _forward_small(xa[low], a, b, q)
    hi = ~low
    if np.any(hi):
        z = -np.expm1(q * np.log(xa[hi]))
        out[hi] = params.half_period - _forward_peak(z ** b, a, b, q)
    return _out(out, x)


def sin_pq(params: PQParams, x):
    """Generalised sine ``sin_{p,q}(x)`` for real ``x``."""
    s, _, _ = _evaluate(params, x)
    return _out(s, x)


def cos_pq(params: PQParams, x):
    """Derivative of sin_{p,q}: ``(1 - |sin|^q)^(1/p)`` with the sign of the slope.

    Even in ``x`` and antisymmetric about ``pi_pq / 2``.
    """
    _, z, c_sign = _evaluate(params, x)
    return _out(c_sign * z ** (1.0 / params.p), x)


def one_minus_cos_pq(params: PQParams, x):
    """``1 - cos_{p,q}(x)`` without cancellation near the zeros of sin."""
    y, z, c_sign = _evaluate(params, x)
    s = np.abs(y) ** params.q
    with np.errstate(divide="ignore", invalid="ignore"):
        # z = 1 - s has lost the low bits of s when s is small
        pos = np.where(s <= 0.5, -np.expm1(np.log1p(-s) / params.p), -np.expm1(np.log(z) / params.p))
    out = np.where(c_sign > 0, pos, 1.0 + z ** (1.0 / params.p))
    return _out(out, x)


def tan_pq(params: PQParams, x):
    """``sin_{p,q} / cos_{p,q}``; raises PoleError where cos vanishes."""
    _, d, _, _ = _reduce(params, x)
    # an odd multiple of pi_pq/2 is only known to within rounding of x
    if np.any(d <= 2.0 * _EPS * np.maximum(np.abs(x), params.half_period)):
        raise PoleError("tan_pq has a pole at odd multiples of pi_pq/2")
    s, z, c_sign = _evaluate(params, x)
    return _out(s / (c_sign * z ** (1.0 / params.p)), x)


def sinc_pq(params: PQParams, x):
    """``sin_{p,q}(x) / x`` with value 1 at the origin.

    Close to the origin the reversion series in ``t = |x|^q`` is summed
    instead, so both paths agree to rounding at the switch.
    """
    xa = np.asarray(x, dtype=float)
    out = np.empty(xa.shape)
    ax = np.abs(xa)
    near = ax <= _SERIES_SWITCH * params.half_period
    if np.any(near):
        coeffs = _reversion(params.p, params.q, _SINC_SERIES_ORDER)
        t = ax[near] ** params.q
        out[near] = np.polynomial.polynomial.polyval(t, coeffs)
    far = ~near
    if np.any(far):
        xf = xa[far]
        out[far] = sin_pq(params, xf) / xf
    return _out(out, x)


@dataclass(frozen=True)
class SeriesCoeffs:
    """Coefficients ``a_j`` of ``sinc_{p,q}(x) = sum_j a_j |x|^(q j)``.

    ``a[0:3]`` are the closed forms; ``numeric_from`` marks the first index
    obtained from the floating-point reversion recurrence.
    """

    a: tuple
    max_order: int
    numeric_from: int = 3


def _decimal_pow_series(c, alpha, n):
    # J.C.P. Miller recurrence for (sum c_k v^k)^alpha with c_0 = 1
    out = [Decimal(1)] + [Decimal(0)] * (n - 1)
    for k in range(1, n):
        acc = Decimal(0)
        for j in range(1, k + 1):
            acc += ((alpha + 1) * j - k) * c[j] * out[k - j]
        out[k] = acc / k
    return out


@lru_cache(maxsize=128)
def _reversion(p: float, q: float, order: int) -> np.ndarray:
    """Coefficients of ``sinc_{p,q}`` in ``t = |x|^q`` up to ``t^order``.

    With ``Phi(v) = F(y) / y`` in ``v = y^q``, Lagrange inversion gives
    ``a_n = [v^n] Phi(v)^-(q n + 1) / (q n + 1)``.  The alternating sums
    cancel about three digits per order, so they run in decimal arithmetic
    with ample guard digits.
    """
    n = order + 1
    with localcontext() as ctx:
        ctx.prec = 40 + 4 * order
        dp, dq = Decimal(p), Decimal(q)
        phi = []
        c = Decimal(1)
        for k in range(n):
            phi.append(c / (dq * k + 1))
            c = c * (1 / dp + k) / (k + 1)
        a = [1.0]
        for m in range(1, n):
            e = dq * m + 1
            a.append(float(_decimal_pow_series(phi, -e, m + 1)[m] / e))
    out = np.array(a)
    out.setflags(write=False)
    return out


def series_coeffs(params: PQParams, max_order: int) -> SeriesCoeffs:
    """Leading coefficients of the small-argument expansion of sinc_{p,q}."""
    if max_order < 2:
        raise DomainError("series_coeffs needs max_order >= 2")
    p, q = params.p, params.q
    closed = [
        1.0,
        -1.0 / (p * (q + 1.0)),
        (1.0 - p + 3.0 * q - p * q) / (2.0 * p * p * (q + 1.0) * (2.0 * q + 1.0)),
    ]
    rev = _reversion(p, q, max(max_order, 2))
    coeffs = closed + [float(v) for v in rev[3 : max_order + 1]]
    return SeriesCoeffs(a=tuple(coeffs), max_order=max_order)


def ode_residual(params: PQParams, x: float, h: float) -> float:
    """Central-difference residual of ``-(|u'|^(p-2) u')' - (q/p*) |u|^(q-2) u``.

    ``u = sin_{p,q}``; the stencil ``[x-h, x+h]`` must stay inside
    ``(0, pi_pq/2)``.  The residual is ``O(h^2)``.
    """
    if h <= 0 or x - h <= 0 or x + h >= params.half_period:
        raise DomainError("ODE stencil must lie inside (0, pi_pq/2)")
    p, q = params.p, params.q
    s, z, c_sign = _evaluate(params, np.array([x - h, x, x + h]))
    # |cos|^(p-2) cos = z^((p-1)/p) on the open quarter period
    flux = c_sign * z ** ((p - 1.0) / p)
    dflux = (flux[2] - flux[0]) / (2.0 * h)
    lam = q / params.p_star
    return float(-dflux - lam * abs(s[1]) ** (q - 2.0) * s[1])

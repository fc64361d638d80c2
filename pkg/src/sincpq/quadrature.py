"""Quadrature engines.

``integrate`` is an adaptive tanh-sinh rule on a finite interval.  Nodes are
placed by their distance to the nearer endpoint, so the endpoints themselves
are never evaluated and integrable endpoint singularities are harmless.

``integrate_oscillatory`` handles ``int_offset^inf f`` for integrands that
change sign (or shape) with a fixed spacing ``period``.  Every panel
``[offset + n T, offset + (n+1) T]`` is integrated with the same tanh-sinh
rule and the sequence of partial sums is accelerated:

* ``signed``: panels alternate in sign; Wynn's epsilon algorithm.
* ``absolute_power(m)``: ``0 <= f <= envelope * x^-m``; Richardson
  extrapolation in the panel count with the known tail exponents
  ``m - 1, m, m + 1, ...``, or plain truncation once the analytic tail bound
  drops below the tolerance.

Integrands are called with numpy arrays and must return arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .errors import ConvergenceError, DomainError, IntegrandError

__all__ = [
    "QuadResult",
    "Signed",
    "AbsolutePower",
    "SIGNED",
    "integrate",
    "integrate_oscillatory",
    "wynn_epsilon",
]

DEFAULT_TOL = 1e-9
_EPS = np.finfo(float).eps
# tanh-sinh abscissae are truncated where 1 - x drops below this
_T_MAX_COMPLEMENT = 1e-300


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool
    periods_used: int = 0
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.evaluations <= 0:
            raise ValueError("QuadResult needs at least one evaluation")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_error_estimate", float(self.abs_error_estimate))
        object.__setattr__(self, "evaluations", int(self.evaluations))
        object.__setattr__(self, "converged", bool(self.converged))
        object.__setattr__(self, "periods_used", int(self.periods_used))


@dataclass(frozen=True)
class Signed:
    """Alternating panels; accelerated with the epsilon algorithm."""

    name = "signed"


@dataclass(frozen=True)
class AbsolutePower:
    """Nonnegative integrand bounded by ``envelope * x**(-m)``."""

    m: float
    envelope: float = 1.0
    name = "absolute_power"


SIGNED = Signed()
Mode = Union[Signed, AbsolutePower]


@lru_cache(maxsize=32)
def _ts_level(level: int):
    """Nodes of tanh-sinh level ``level`` (step ``2**-level``).

    Returns ``(j, comp, weight)`` for ``j >= 1`` where ``comp = 1 - x_j`` and
    the weight excludes the step ``h``; the centre node has weight ``pi / 2``.
    """
    h = 2.0 ** -level
    t_max = math.asinh(2.0 / math.pi * 0.5 * math.log(2.0 / _T_MAX_COMPLEMENT))
    j = np.arange(1, int(math.ceil(t_max / h)) + 1)
    t = j * h
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * u)
    comp = 2.0 * e / (1.0 + e)
    w = 0.5 * math.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    keep = comp > 0
    return j[keep], comp[keep], w[keep]


def _ts_nodes(level: int, only_new: bool):
    """Right-side nodes of a level; with ``only_new`` just the odd ``j``."""
    j, comp, w = _ts_level(level)
    if only_new and level > 0:
        sel = (j % 2) == 1
        return comp[sel], w[sel]
    return comp, w


def _eval(f, x, d=None):
    y = np.asarray(f(x) if d is None else f(x, d), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if np.isnan(y).any():
        bad = x[np.isnan(y)][0]
        raise IntegrandError(f"integrand returned NaN at x = {bad!r}")
    return y


def _level_sum(f, a, b, comp, w, centre, distances=False):
    """Unscaled weighted sum over symmetric nodes on ``[a, b]``.

    Also returns a bound on the mass lost to nodes that collapse onto an
    endpoint in floating point (they are dropped, never evaluated).  With
    ``distances`` the integrand also receives the signed offset from the
    nearer endpoint, so no node needs to be dropped.
    """
    half = 0.5 * (b - a)
    off = half * comp
    ok = off > 0 if distances else (a + off > a) & (b - off < b)
    off, w = off[ok], w[ok]
    x = np.concatenate((a + off, b - off))
    y = _eval(f, x, np.concatenate((off, -off)) if distances else None)
    ww = np.concatenate((w, w))
    s = float(np.dot(ww, y))
    a_s = float(np.dot(ww, np.abs(y)))
    n = x.size
    edge = (math.inf, 0.0)
    if off.size:
        # factor 4 covers endpoint singularities up to about |x - b|^-0.75
        edge = (off[-1], 4.0 * (abs(y[off.size - 1]) + abs(y[-1])) * off[-1])
    if centre:
        xc = np.array([0.5 * (a + b)])
        yc = _eval(f, xc, np.array([half]) if distances else None)[0]
        s += 0.5 * math.pi * yc
        a_s += 0.5 * math.pi * abs(yc)
        n += 1
    return s, a_s, n, edge


def _tanh_sinh(f, a, b, tol, max_level, distances=False):
    """Successive tanh-sinh levels on ``[a, b]`` until two agree within ``tol``."""
    half = 0.5 * (b - a)
    comp, w = _ts_nodes(0, only_new=False)
    total, abs_total, n, edge = _level_sum(f, a, b, comp, w, True, distances)
    prev = half * total
    value = prev
    est = math.inf
    for level in range(1, max_level + 1):
        comp, w = _ts_nodes(level, only_new=True)
        s, a_s, k, edge_new = _level_sum(f, a, b, comp, w, False, distances)
        n += k
        total += s
        abs_total += a_s
        h = 2.0 ** -level
        value = half * h * total
        if edge_new[0] < edge[0]:
            edge = edge_new
        est = abs(value - prev) + edge[1] + 10.0 * _EPS * half * h * abs_total
        prev = value
        if level >= 3 and est <= tol:
            break
    return value, est, n, edge[1]


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    max_level: int = 7,
    max_depth: int = 24,
    max_evals: int = 2_000_000,
    distances: bool = False,
) -> QuadResult:
    """Adaptive tanh-sinh quadrature of ``f`` over ``[a, b]``.

    The interval is bisected whenever a single tanh-sinh sequence does not
    converge by ``max_level``; each half gets half the tolerance.

    With ``distances=True`` the integrand is called as ``f(x, d)`` where
    ``d`` is the signed offset from the nearer endpoint of the current
    subinterval (``x - lo > 0`` on the left half, ``x - hi < 0`` on the
    right).  Singular integrands that use ``d`` avoid the cancellation in
    ``b - x`` and can be resolved far closer to the endpoint.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"integrate needs finite a < b, got [{a}, {b}]")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    stack = [(a, b, tol, 0)]
    value = 0.0
    err = 0.0
    evals = 0
    ok = True
    while stack:
        lo, hi, t, depth = stack.pop()
        v, e, n, edge = _tanh_sinh(f, lo, hi, t, max_level, distances)
        evals += n
        # bisection cannot recover mass lost to unrepresentable end nodes
        if e <= t or depth >= max_depth or edge > 0.5 * t or evals > max_evals:
            value += v
            err += e
            ok &= e <= t
            continue
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, 0.5 * t, depth + 1))
        stack.append((lo, mid, 0.5 * t, depth + 1))
    return QuadResult(float(value), float(err), evals, bool(ok and err <= tol))


def wynn_epsilon(seq, max_order: int = 12):
    """Epsilon-algorithm estimates of the limit of ``seq``.

    Returns ``(best, previous)`` taken from the two highest even columns
    reachable with at most ``2 * max_order + 1`` trailing terms.
    """
    s = np.asarray(seq, dtype=float)[-(2 * max_order + 1):]
    n = s.size
    if n < 3:
        return float(s[-1]), float(s[-2]) if n > 1 else math.inf
    prev = np.zeros(n + 1)
    cur = s.copy()
    evens = [cur]
    for k in range(1, n):
        diff = cur[1:] - cur[:-1]
        if np.any(diff == 0):
            break
        nxt = prev[1 : cur.size] + 1.0 / diff
        prev, cur = cur, nxt
        if k % 2 == 0:
            evens.append(cur)
        if cur.size == 1:
            break
    best = evens[-1][-1]
    if len(evens) >= 2:
        other = evens[-2][-1]
    else:
        other = evens[-1][-2] if evens[-1].size > 1 else math.inf
    return float(best), float(other)


class _PanelRule:
    """Fixed tanh-sinh rule replicated over equal sub-panels of every panel."""

    def __init__(self, period, splits, level, offset):
        self.period = period
        self.offset = offset
        sub = period / splits
        half = 0.5 * sub
        rel = [0.5 * sub]
        w = [0.5 * math.pi]
        for lev in range(0, level + 1):
            comp, ww = _ts_nodes(lev, only_new=lev > 0)
            rel.extend(half * comp)
            w.extend(ww)
            rel.extend(sub - half * comp)
            w.extend(ww)
        rel = np.asarray(rel)
        w = np.asarray(w) * half * 2.0 ** -level
        keep = (rel > 0) & (rel < sub)
        rel, w = rel[keep], w[keep]
        self.rel = np.concatenate([k * sub + rel for k in range(splits)])
        self.w = np.tile(w, splits)

    def panels(self, f, n0, n1):
        """Integrals of the panels ``n0 .. n1-1``."""
        n = np.arange(n0, n1)[:, None]
        x = self.offset + n * self.period + self.rel[None, :]
        y = _eval(f, x.ravel()).reshape(x.shape)
        return y @ self.w, x.size


def _choose_level(f, period, splits, offset, tol, max_level):
    """Smallest panel level whose first two panels agree with the next level."""
    prev = None
    evals = 0
    for level in range(3, max_level + 1):
        rule = _PanelRule(period, splits, level, offset)
        vals, n = rule.panels(f, 0, 2)
        evals += n
        if prev is not None and np.max(np.abs(vals - prev)) <= tol:
            return rule, float(np.max(np.abs(vals - prev))), evals
        prev = vals
    return rule, float(np.max(np.abs(vals - prev))), evals


def integrate_oscillatory(
    f: Callable[[np.ndarray], np.ndarray],
    period: float,
    tol: float = DEFAULT_TOL,
    mode: Mode = SIGNED,
    *,
    offset: float = 0.0,
    splits: int = 2,
    max_periods: int = 10_000,
    min_periods: int = 8,
    max_level: int = 8,
) -> QuadResult:
    """Integrate ``f`` over ``[offset, inf)`` panel by panel.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    period : float
        Panel length ``T``.  For ``signed`` mode this is the spacing of the
        sign changes; for ``absolute_power`` it must be a period of
        ``f(x) * x**m``.
    tol : float
        Absolute tolerance on the integral.
    mode : Signed or AbsolutePower
    offset : float
        Left end of the first panel.
    splits : int
        Each panel is cut into this many equal pieces before applying the
        rule, so interior kinks of the integrand land on rule endpoints.
    max_periods : int
        Panels allowed before giving up with ConvergenceError.

    The returned ``notes`` carry ``partial_sums`` (cumulative panel sums)
    and the acceleration used.  A ConvergenceError carries the same partial
    result.
    """
    if period <= 0 or not math.isfinite(period):
        raise DomainError("period must be positive and finite")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    rule, quad_err, evals = _choose_level(f, period, splits, offset, 1e-3 * tol, max_level)
    if isinstance(mode, AbsolutePower):
        return _absolute(f, rule, tol, mode, max_periods, min_periods, quad_err, evals)
    return _signed(f, rule, tol, max_periods, min_periods, quad_err, evals)


def _fail(msg, value, err, evals, n, sums, accel):
    res = QuadResult(
        value, err, max(evals, 1), False, n, {"partial_sums": sums, "acceleration": accel}
    )
    raise ConvergenceError(msg, res)


def _signed(f, rule, tol, max_periods, min_periods, quad_err, evals):
    batch = max(min_periods, 8)
    panels = np.empty(0)
    best = math.nan
    err = math.inf
    while panels.size < max_periods:
        n0 = panels.size
        n1 = min(n0 + batch, max_periods)
        vals, k = rule.panels(f, n0, n1)
        evals += k
        panels = np.concatenate((panels, vals))
        sums = np.cumsum(panels)
        if sums.size < 5:
            continue
        best, other = wynn_epsilon(sums)
        prev_best, _ = wynn_epsilon(sums[:-1])
        err = max(abs(best - other), abs(best - prev_best)) + quad_err * math.sqrt(sums.size)
        if err <= tol and sums.size >= min_periods:
            return QuadResult(
                best,
                err,
                evals,
                True,
                int(sums.size),
                {"partial_sums": sums, "acceleration": "wynn_epsilon"},
            )
        batch = min(2 * batch, 256)
    _fail(
        f"epsilon acceleration did not reach tol={tol:g} within {max_periods} panels",
        best,
        err,
        evals,
        int(panels.size),
        np.cumsum(panels),
        "wynn_epsilon",
    )


def _absolute(f, rule, tol, mode, max_periods, min_periods, quad_err, evals):
    m = float(mode.m)
    n_target = max(min_periods, 8)
    panels = np.empty(0)
    table = []
    estimates = []
    err = math.inf
    value = math.nan
    while n_target <= max_periods:
        vals, k = rule.panels(f, panels.size, n_target)
        evals += k
        panels = np.concatenate((panels, vals))
        total = float(np.sum(panels))
        n = panels.size
        if m > 1:
            x_end = rule.offset + n * rule.period
            bound = mode.envelope * x_end ** (1.0 - m) / (m - 1.0)
            if bound <= tol:
                sums = np.cumsum(panels)
                return QuadResult(
                    total,
                    bound + quad_err * n,
                    evals,
                    True,
                    n,
                    {"partial_sums": sums, "acceleration": "truncation"},
                )
            row = [total]
            for col, prev in enumerate(table[-1] if table else []):
                e = m - 1.0 + col
                row.append(row[col] + (row[col] - prev) / (2.0 ** e - 1.0))
            table.append(row)
            estimates.append(row[-1])
            if len(estimates) >= 3:
                err = abs(estimates[-1] - estimates[-2]) + quad_err * math.sqrt(n)
                value = estimates[-1]
                if err <= tol:
                    return QuadResult(
                        value,
                        err,
                        evals,
                        True,
                        n,
                        {"partial_sums": np.cumsum(panels), "acceleration": "richardson"},
                    )
        else:
            value = total
        if n_target == max_periods:
            break
        n_target = min(2 * n_target, max_periods)
    _fail(
        f"absolute_power({m:g}) integral did not converge within {max_periods} panels",
        value,
        err,
        evals,
        int(panels.size),
        np.cumsum(panels),
        "richardson" if m > 1 else "none",
    )

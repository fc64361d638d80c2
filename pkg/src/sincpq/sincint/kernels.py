"""Lattice-sum kernels ``L_r(t) = sum_n (-1)^(r n) / (t + n)^r`` on ``(0, 1)``."""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, DomainError, PoleError

__all__ = ["kernel_L", "kernel_L_series", "kernel_weight"]

# B_{2j} / (2j)!
_BERNOULLI_OVER_FACT = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
)
_N_DIRECT = 31
_N_MAX = 1_000_000


def _check_t(r, t):
    if int(r) != r or r < 1:
        raise DomainError(f"kernel order must be a positive integer, got {r}")
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0) | (t >= 1)):
        if np.any((t == 0) | (t == 1)):
            raise PoleError("L_r has poles at t = 0 and t = 1")
        raise DomainError("L_r is evaluated on (0, 1)")
    return int(r), t


def kernel_L(r: int, t):
    """Closed forms of ``L_r`` for ``r = 1, 2, 3, 4``."""
    r, ta = _check_t(r, t)
    if r > 4:
        raise DomainError("closed forms exist for r <= 4; use kernel_L_series")
    s = np.sin(np.pi * ta)
    s2 = s * s
    if r == 1:
        out = np.pi / s
    elif r == 2:
        out = np.pi ** 2 / s2
    elif r == 3:
        out = np.pi ** 3 * (2.0 - s2) / (2.0 * s2 * s)
    else:
        out = np.pi ** 4 * (3.0 - 2.0 * s2) / (3.0 * s2 * s2)
    return float(out) if np.ndim(t) == 0 else out


def _zeta_tail(s, a):
    """``sum_{k>=0} (a + k)^-s`` by Euler-Maclaurin, for ``a >= 8``.

    At ``s = 1`` the divergent integral term is replaced by ``-ln a``; only
    differences of such values are meaningful.
    """
    a = np.asarray(a, dtype=float)
    if s == 1:
        out = -np.log(a)
    else:
        out = a ** (1.0 - s) / (s - 1.0)
    out = out + 0.5 * a ** (-s)
    rising = s
    power = a ** (-s - 1.0)
    inv2 = 1.0 / (a * a)
    for j, c in enumerate(_BERNOULLI_OVER_FACT):
        out = out + c * rising * power
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power = power * inv2
    return out


def _alternating_tail(r, c, start):
    """``sum_{n >= start} (-1)^n (n + c)^-r`` for even ``start``."""
    scale = 2.0 ** -r
    return scale * (_zeta_tail(r, 0.5 * (start + c)) - _zeta_tail(r, 0.5 * (start + 1 + c)))


def _lattice(r, t, n_direct, skip_zero=False):
    n = np.arange(-n_direct, n_direct + 1)
    if skip_zero:
        n = n[n != 0]
    sign = np.where((r * n) % 2 == 0, 1.0, -1.0)
    head = np.sum(sign[None, :] / (t[:, None] + n[None, :]) ** r, axis=1)
    start = n_direct + 1
    if r % 2 == 0:
        tail = _zeta_tail(r, start + t) + _zeta_tail(r, start - t)
    else:
        # (-1)^(r n) = (-1)^n for odd r; the negative side picks up (-1)^r = -1
        s0 = start + (start % 2)
        tail_pos = _alternating_tail(r, t, s0)
        tail_neg = _alternating_tail(r, -t, s0)
        if start % 2:
            tail_pos = tail_pos + (-1.0) ** start * (start + t) ** (-r)
            tail_neg = tail_neg + (-1.0) ** start * (start - t) ** (-r)
        tail = tail_pos - tail_neg
    return head + tail


def kernel_L_series(r: int, t, tol: float = 1e-12, *, skip_zero: bool = False):
    """``L_r(t)`` from symmetric partial sums ``S_{r,N}`` plus an Euler-Maclaurin tail.

    ``N`` is doubled until two successive values agree within ``tol``.  With
    ``skip_zero`` the ``n = 0`` term ``t^-r`` is left out.
    """
    r, ta = _check_t(r, t)
    flat = np.atleast_1d(ta).astype(float).ravel()
    n_direct = _N_DIRECT
    prev = _lattice(r, flat, n_direct, skip_zero)
    while True:
        n_direct = 2 * n_direct + 1
        if n_direct > _N_MAX:
            raise ConvergenceError(f"L_{r} partial sums did not settle within {_N_MAX} pairs")
        cur = _lattice(r, flat, n_direct, skip_zero)
        if np.all(np.abs(cur - prev) <= tol * np.maximum(1.0, np.abs(cur))):
            break
        prev = cur
    out = cur.reshape(np.shape(ta))
    return float(out) if np.ndim(t) == 0 else out


def kernel_weight(r: int, t):
    """``sin(pi t)^r L_r(t)``, finite on ``[0, 1]``.

    Polynomial in ``sin^2(pi t)`` for ``r <= 4``; otherwise
    ``(sin(pi t)/t)^r + sin(pi t)^r (L_r(t) - t^-r)`` from the series.
    """
    ta = np.asarray(t, dtype=float)
    s = np.sin(np.pi * ta)
    s2 = s * s
    pi = np.pi
    if r == 1:
        return np.full_like(ta, pi)
    if r == 2:
        return np.full_like(ta, pi ** 2)
    if r == 3:
        return pi ** 3 * (2.0 - s2) / 2.0
    if r == 4:
        return pi ** 4 * (3.0 - 2.0 * s2) / 3.0
    # the remaining sum is bounded only on [0, 1/2]; callers fold by symmetry
    tt = np.clip(ta, 1e-300, 0.5)
    ratio = pi * np.sinc(tt)
    rest = kernel_L_series(r, tt, 1e-14, skip_zero=True)
    return ratio ** r + s ** r * rest

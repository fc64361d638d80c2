import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sincpq.errors import ConvergenceError, DomainError, IntegrandError
from sincpq.gentrig import make_params, sin_pq, sinc_pq
from sincpq.quadrature import (
    SIGNED,
    AbsolutePower,
    QuadResult,
    integrate,
    integrate_oscillatory,
    wynn_epsilon,
)


def test_constant():
    res = integrate(lambda x: np.ones_like(x), 0.0, 1.0, 1e-12)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.periods_used == 0 and res.evaluations > 0


def test_arcsine_with_endpoint_distance():
    def f(x, d):
        one_minus = np.where(d < 0, -d, 1.0 - x)
        return 1.0 / np.sqrt(one_minus * (1.0 + x))

    res = integrate(f, 0.0, 1.0, 1e-12, distances=True)
    assert res.converged
    assert res.value == pytest.approx(math.pi / 2, abs=1e-12)


def test_arcsine_naive_form_is_honest():
    f = lambda t: 1.0 / np.sqrt(1.0 - t * t)
    loose = integrate(f, 0.0, 1.0, 1e-7)
    assert loose.converged and abs(loose.value - math.pi / 2) <= 1e-7
    # 1 - t is not representable below 1e-16, so 1e-12 is out of reach
    tight = integrate(f, 0.0, 1.0, 1e-12)
    assert not tight.converged
    assert abs(tight.value - math.pi / 2) <= 10 * tight.abs_error_estimate


def test_classical_transform_ratio_is_one():
    pr = make_params(2, 2)
    res = integrate(lambda t: sin_pq(pr, pr.pi_pq * t) / np.sin(np.pi * t), 0.0, 1.0, 1e-10)
    assert res.value == pytest.approx(1.0, abs=1e-10)


BATTERY = [
    (lambda x: np.exp(x), 0.0, 1.0, math.e - 1.0),
    (lambda x: np.log(x), 0.0, 1.0, -1.0),
    (lambda x: x ** -0.5, 0.0, 1.0, 2.0),
    (lambda x: 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 0.4 * math.atan(5.0)),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.29),
    (lambda x: np.cos(40.0 * x), 0.0, 2.0, math.sin(80.0) / 40.0),
    (lambda x: (1.0 - x) ** -0.25 * x ** 3, 0.0, 1.0, float(mp.beta(4, 0.75))),
]


@pytest.mark.parametrize("f, a, b, truth", BATTERY)
@pytest.mark.parametrize("tol", [1e-6, 1e-10])
def test_error_estimate_honesty(f, a, b, truth, tol):
    res = integrate(f, a, b, tol)
    assert abs(res.value - truth) <= 10 * res.abs_error_estimate + 1e-15
    if res.converged:
        assert res.abs_error_estimate <= tol
        assert abs(res.value - truth) <= 10 * tol


@given(st.floats(0.05, 0.95), st.floats(1.1, 4.0))
def test_additivity(c, k):
    f = lambda x: np.sin(k * x) * x ** -0.3
    whole = integrate(f, 0.0, 1.0, 1e-11)
    left, right = integrate(f, 0.0, c, 1e-11), integrate(f, c, 1.0, 1e-11)
    tol = whole.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate
    assert abs(left.value + right.value - whole.value) <= tol + 1e-14


def test_nan_integrand_aborts():
    with pytest.raises(IntegrandError):
        integrate(lambda x: np.where(x > 0.5, np.nan, x), 0.0, 1.0)


@pytest.mark.parametrize("a, b, tol", [(1.0, 0.0, 1e-9), (0.0, math.inf, 1e-9), (0.0, 1.0, 0.0)])
def test_bad_arguments(a, b, tol):
    with pytest.raises(DomainError):
        integrate(lambda x: x, a, b, tol)


def test_quadresult_requires_evaluations():
    with pytest.raises(ValueError):
        QuadResult(0.0, 0.0, 0, True)


# ------------------------------------------------------------------ Wynn


def test_wynn_alternating_harmonic():
    sums = np.cumsum([(-1) ** k / (k + 1) for k in range(20)])
    best, _ = wynn_epsilon(sums)
    assert best == pytest.approx(math.log(2), abs=1e-12)


def test_wynn_geometric_exact():
    sums = np.cumsum(0.5 ** np.arange(6))
    best, _ = wynn_epsilon(sums)
    assert best == pytest.approx(2.0, abs=1e-14)


# ------------------------------------------------------------------ oscillatory


def test_signed_sinc():
    pr = make_params(2, 2)
    res = integrate_oscillatory(lambda x: sinc_pq(pr, x), pr.pi_pq, 1e-10, SIGNED)
    assert res.converged
    assert res.value == pytest.approx(math.pi / 2, abs=1e-8)
    assert res.notes["acceleration"] == "wynn_epsilon"


def test_absolute_power_sinc_squared():
    pr = make_params(2, 2)
    res = integrate_oscillatory(lambda x: sinc_pq(pr, x) ** 2, pr.pi_pq, 1e-10, AbsolutePower(2))
    assert res.converged
    assert res.value == pytest.approx(math.pi / 2, abs=1e-9)


def test_absolute_power_fractional_against_mpmath():
    pr = make_params(2, 2)
    m = 2.5
    res = integrate_oscillatory(lambda x: np.abs(sinc_pq(pr, x)) ** m, pr.pi_pq, 1e-10, AbsolutePower(m))
    # oracle: mpmath panel sum over 200 periods plus the averaged tail
    mp.mp.dps = 20
    head = mp.quad(lambda x: abs(mp.sinc(x)) ** m, mp.linspace(0, 200 * mp.pi, 201))
    mean = mp.quad(lambda x: abs(mp.sin(x)) ** m, [0, mp.pi]) / mp.pi
    tail = mean * (200 * mp.pi) ** (1 - m) / (m - 1)
    assert res.value == pytest.approx(float(head + tail), abs=1e-6)


def test_absolute_power_one_diverges():
    pr = make_params(2, 2)
    with pytest.raises(ConvergenceError) as info:
        integrate_oscillatory(lambda x: np.abs(sinc_pq(pr, x)), pr.pi_pq, 1e-9, AbsolutePower(1), max_periods=200)
    partial = info.value.result
    assert not partial.converged
    sums = partial.notes["partial_sums"]
    assert len(sums) == 200 and np.all(np.diff(sums) > 0)


def test_signed_budget_exhaustion_raises():
    pr = make_params(2, 2)
    with pytest.raises(ConvergenceError):
        integrate_oscillatory(lambda x: sinc_pq(pr, x), pr.pi_pq, 1e-15, SIGNED, max_periods=10)


def test_offset_and_splits():
    pr = make_params(2, 2)
    f = lambda x: sinc_pq(pr, x) ** 2
    tail = integrate_oscillatory(f, pr.pi_pq, 1e-11, AbsolutePower(2), offset=pr.pi_pq, splits=4)
    head = integrate(f, 0.0, pr.pi_pq, 1e-12)
    assert head.value + tail.value == pytest.approx(math.pi / 2, abs=1e-10)


@pytest.mark.parametrize("p, q", [(2.5, 2.5), (3, 2), (2, 3)])
def test_signed_matches_finite_quadrature_head(p, q):
    pr = make_params(p, q)
    res = integrate_oscillatory(lambda x: sinc_pq(pr, x), pr.pi_pq, 1e-10, SIGNED)
    sums = res.notes["partial_sums"]
    direct = integrate(lambda x: sinc_pq(pr, x), 0.0, 3 * pr.pi_pq, 1e-12).value
    assert sums[2] == pytest.approx(direct, abs=1e-11)

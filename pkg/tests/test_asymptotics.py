import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gamma as sp_gamma

from sincpq.errors import DomainError
from sincpq.gentrig import make_params
from sincpq.sincint import (
    CLASSICAL_C2,
    FitInstabilityWarning,
    I_pq,
    asymptotic_model,
    ball_inequality_scan,
    convexity_threshold,
    estimate_gamma2,
    limit_I,
    one_over_m_coefficient,
    sinc_power_integral_transform,
)

CLASSICAL = make_params(2, 2)
SQRT_3PI_2 = math.sqrt(1.5 * math.pi)


def test_classical_model_constants():
    model = asymptotic_model(CLASSICAL)
    assert model.gamma0 == pytest.approx(math.sqrt(6), rel=1e-15)
    assert model.leading == pytest.approx(SQRT_3PI_2, abs=1e-12)
    assert model.first_order / model.leading == pytest.approx(-3 / 20, abs=1e-12)
    assert one_over_m_coefficient(2, 2) == pytest.approx(3 / 20, abs=1e-15)
    assert model.classical_c2_target == pytest.approx(-SQRT_3PI_2 * 13 / 1120, rel=1e-15)
    assert model.lam == 0.5 and model.mu == 1.0


def test_gamma0_32():
    assert asymptotic_model(make_params(3, 2)).gamma0 == pytest.approx(3.0, rel=1e-15)
    assert asymptotic_model(make_params(3, 2)).classical_c2_target is None


@given(st.floats(1.2, 5.0), st.floats(1.2, 5.0))
def test_gamma1_closed_form_matches_phase_coefficients(p, q):
    model = asymptotic_model(make_params(p, q))
    assert model.gamma1 == pytest.approx(model.gamma1_from_phase, rel=1e-11)
    assert model.gamma0 == pytest.approx(model.f0 ** (-1 / q), rel=1e-13)


@given(st.floats(1.2, 5.0), st.floats(1.2, 5.0))
def test_limit_equals_leading_term(p, q):
    pr = make_params(p, q)
    assert limit_I(pr) == pytest.approx(asymptotic_model(pr).leading, rel=1e-14)
    ref = sp_gamma(1 / q) * (p * (q + 1)) ** (1 / q) / q
    assert limit_I(pr) == pytest.approx(ref, rel=1e-13)


def test_limit_values():
    assert limit_I(CLASSICAL) == pytest.approx(2.170803, abs=1e-6)
    pr = make_params(2, 4)
    assert limit_I(pr) == pytest.approx(0.25 * sp_gamma(0.25) * 10 ** 0.25, rel=1e-13)
    assert limit_I(pr) == pytest.approx(1.61184, abs=1e-5)
    assert I_pq(pr, 1e4).value == pytest.approx(limit_I(pr), rel=1e-2)


def test_convexity_threshold():
    assert convexity_threshold(2) == pytest.approx(16 / 9, rel=1e-15)
    assert one_over_m_coefficient(1.5, 2) < 0  # 1 - K/m decreasing in m
    assert one_over_m_coefficient(2, 2) > 0
    model = asymptotic_model(make_params(1.5, 2))
    assert model.tilde_I(10) > model.tilde_I(20)


@given(st.floats(1.1, 8.0))
def test_convexity_threshold_zeroes_coefficient(q):
    assert abs(one_over_m_coefficient(convexity_threshold(q), q)) < 1e-12


def test_I_classical_m2():
    res = I_pq(CLASSICAL, 2.0, 1e-11)
    assert res.value == pytest.approx(math.sqrt(2) * math.pi / 2, abs=1e-10)


def test_I_m100_near_expansion():
    target = SQRT_3PI_2 * (1 - 3 / 2000 - 13 / 11_200_000)
    assert I_pq(CLASSICAL, 100).value == pytest.approx(target, rel=5e-3)
    # what is left is the unlisted 1/m^3 term
    assert I_pq(CLASSICAL, 100).value == pytest.approx(target, abs=1e-6)


def test_I_increases_towards_limit_from_below():
    vals = [I_pq(CLASSICAL, m).value for m in (10, 100, 1000)]
    assert vals[0] < vals[1] < vals[2] < SQRT_3PI_2


@pytest.mark.parametrize("pq", [(2, 2), (3, 2), (2.5, 3)])
@pytest.mark.parametrize("m", [50, 200])
def test_tail_independence(pq, m):
    pr = make_params(*pq)
    vals = [I_pq(pr, m, 1e-11, alpha=a).value for a in (0.5, 1.0, 2.0)]
    assert max(vals) - min(vals) < 1e-10


def test_I_matches_transform_for_even_m():
    pr = make_params(3, 2.5)
    for m in (2, 4):
        direct = I_pq(pr, m, 1e-10).value / m ** (1 / pr.q)
        assert direct == pytest.approx(sinc_power_integral_transform(pr, m, 1e-11).value, abs=1e-9)


@pytest.mark.parametrize("pq", [(2, 2), (3, 2), (2, 4), (1.5, 3)])
def test_limit_rate(pq):
    pr = make_params(*pq)
    model = asymptotic_model(pr)
    gap = abs(I_pq(pr, 1e4).value - limit_I(pr))
    assert gap <= 2 * abs(model.first_order / 1e4) + 1e-5


@pytest.mark.parametrize("pq", [(2, 2), (3, 2), (1.5, 3)])
def test_model_error_is_second_order(pq):
    pr = make_params(*pq)
    model = asymptotic_model(pr)
    errs = [abs(I_pq(pr, m, 1e-12).value - model.tilde_I(m)) for m in (200, 400, 800, 1600, 3200)]
    dev = [abs(a / b - 4.0) for a, b in zip(errs, errs[1:])]
    # O(1/m^2) error: doubling ratios tend to 4 with an O(1/m) offset
    assert dev[-1] < 0.15
    assert all(d1 < 0.7 * d0 or d1 < 0.01 for d0, d1 in zip(dev, dev[1:]))


def test_I_domain():
    with pytest.raises(DomainError):
        I_pq(CLASSICAL, 1.0)
    with pytest.raises(DomainError):
        I_pq(CLASSICAL, 2.0, alpha=0.0)


def test_ball_scan():
    rep = ball_inequality_scan([2])
    assert rep.passed and rep.abs_diff < 1e-8
    rep = ball_inequality_scan([2, 3, 5, 10, 50])
    assert rep.passed and rep.metadata["argmax_m"] == 2
    rep = ball_inequality_scan([100])
    assert rep.passed
    assert rep.lhs == pytest.approx(SQRT_3PI_2 * (1 - 3 / 2000), abs=1e-5)
    assert rep.lhs < math.pi / math.sqrt(2)


def test_ball_scan_domain():
    with pytest.raises(DomainError):
        ball_inequality_scan([1.5, 2])
    with pytest.raises(DomainError):
        ball_inequality_scan([])


def test_gamma2_classical_within_ten_percent():
    est = estimate_gamma2(CLASSICAL)
    assert est.c2 == pytest.approx(CLASSICAL_C2, rel=0.1)
    assert abs(est.c2 - CLASSICAL_C2) <= max(3 * est.c2_uncertainty, 1e-4 * abs(CLASSICAL_C2))
    assert est.gamma2 == pytest.approx(est.c2 * 2 / sp_gamma(2.5), rel=1e-13)


def test_gamma2_reports_uncertainty_off_classical():
    est = estimate_gamma2(make_params(3, 2))
    assert math.isfinite(est.c2) and est.c2_uncertainty > 0
    assert len(est.scaled_residuals) == 5


def test_gamma2_needs_four_points():
    with pytest.raises(DomainError):
        estimate_gamma2(CLASSICAL, [200, 400, 800])


def test_gamma2_noise_warning():
    with pytest.warns(FitInstabilityWarning):
        estimate_gamma2(CLASSICAL, [5, 6, 7, 8], tol=1e-3)

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genboson.qspecial import (DeformationParams, ScalarSeriesBudget, SeriesDivergence, box_factorial,
                               box_number, box_number_analytic, cal_exp, ck_coefficients, curly_factorial,
                               curly_number, deformed_exp, epsilon_limit_check, epsilon_limit_first_order,
                               floor_binomial, floor_bracket, floor_factorial, gamma_residue,
                               gamma_residue_from_iteration, pole_weight, closed_ck, q_number,
                               q_shifted_factorial, sigma)

NEAR_ONE = DeformationParams(1 + 1e-8, 2.0, 1.0, classical_guard=1e-9)


def test_params_validation():
    with pytest.raises(ValueError):
        DeformationParams(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        DeformationParams(1.2, 0.0, 1.0)
    with pytest.raises(ValueError):
        DeformationParams(1.0, 2.0, 1.0).require_deformed()


def test_q_number_trivial(params):
    assert q_number(0.0, params) == 0.0
    assert q_number(1.0, params) == pytest.approx(1.0, abs=1e-15)


def test_q_number_odd_direct():
    p = DeformationParams(3.0, 1.0, 1.0)
    direct = (3.0 ** -2 - 3.0 ** 2) / (3.0 - 1 / 3.0)
    assert q_number(-2.0, p) == pytest.approx(direct, rel=1e-14)
    assert q_number(-2.0, p) == pytest.approx(-q_number(2.0, p), rel=1e-15)


def test_q_number_classical_guard():
    p = DeformationParams(1.0 + 1e-7, 2.0, 1.0)
    assert q_number(2.5, p) == 2.5


@given(st.floats(-6, 6), st.floats(0.3, 3.0))
def test_q_number_symmetries(x, q):
    p, pinv = DeformationParams(q, 1.0, 1.0), DeformationParams(1 / q, 1.0, 1.0)
    assert q_number(-x, p) == pytest.approx(-q_number(x, p), rel=1e-12, abs=1e-12)
    assert q_number(x, pinv) == pytest.approx(q_number(x, p), rel=1e-12, abs=1e-12)


def test_curly_numbers():
    assert curly_factorial(0, 2.0) == 1.0
    assert curly_number(1, 2.5) == pytest.approx(1.0, rel=1e-15)
    assert curly_number(2, 4.0) == pytest.approx((4 - 0.25) / (2 + 0.5), rel=1e-15)
    assert curly_factorial(3, 4.0) == pytest.approx(1.5 * curly_number(3, 4.0), rel=1e-15)
    with pytest.raises(ValueError):
        curly_number(2, -1.0)


def test_box_number_examples(params):
    assert box_number(0, params) == pytest.approx(0.0, abs=1e-15)
    assert box_number(1, params) == pytest.approx(q_number(params.beta, params), rel=1e-14)
    assert box_factorial(0, params) == 1.0


@pytest.mark.parametrize("p", [DeformationParams(1.3, 2.0, 1.0), DeformationParams(0.7, 1.4, -0.3),
                               DeformationParams(2.2, -0.9, 0.4)])
def test_box_number_sum_rule(p):
    for n in range(33):
        lhs = box_number(n, p) + box_number(n + 1, p)
        rhs = q_number(p.alpha * n + p.beta, p)
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


def test_box_number_negative(params):
    for n in range(1, 6):
        assert box_number(-n, params) == pytest.approx(box_number(n, params.reflected()), rel=1e-15)


def test_sigma(params):
    assert sigma(1, params) == 1.0
    assert sigma(2, params) == pytest.approx(q_number(params.alpha, params), rel=1e-15)
    assert sigma(3, NEAR_ONE) == pytest.approx(4.0, rel=1e-6)
    with pytest.raises(ValueError):
        sigma(0, params)


def test_floor_family():
    assert floor_bracket(0, 2.0) == 0.0
    assert floor_bracket(1, 2.0) == 1.0
    assert floor_bracket(2, 2.0) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        floor_binomial(2, 3, 0.5)


@pytest.mark.parametrize("base", [0.3, 0.77, 2.0])
def test_floor_binomial_matches_factorial_ratio(base):
    for n in range(8):
        for k in range(n + 1):
            ratio = floor_factorial(n, base) / (floor_factorial(k, base) * floor_factorial(n - k, base))
            assert floor_binomial(n, k, base) == pytest.approx(ratio, rel=1e-11)


def test_floor_binomial_finite_at_one():
    # the Pascal form survives base = 1 where floor factorials vanish
    assert floor_binomial(4, 2, 1.0) == pytest.approx(2.0)


def test_q_shifted_factorial():
    assert q_shifted_factorial(0.3 + 1j, 0.5, 0) == 1.0
    assert q_shifted_factorial(1.0, 0.7, 3) == 0.0
    assert q_shifted_factorial(0.5, 0.5, 2) == pytest.approx(0.375, rel=1e-15)


def test_deformed_exp_examples(params):
    assert deformed_exp(0.0, params) == 1.0
    assert deformed_exp(1.0, NEAR_ONE) == pytest.approx(math.e, abs=1e-6)
    assert deformed_exp(-3.0, params) > 0
    assert isinstance(deformed_exp(0.5, params), float)


def test_deformed_exp_budget_error(params):
    with pytest.raises(SeriesDivergence) as info:
        deformed_exp(5.0, params, ScalarSeriesBudget(max_terms=3))
    assert info.value.partial_sum is not None and info.value.last_term > 0


def test_cal_exp_series():
    b = 2.0
    expected = sum(0.7 ** n / curly_factorial(n, b) for n in range(40))
    assert cal_exp(0.7, b) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("p", [DeformationParams(1.3, 2.0, 1.0), DeformationParams(1.7, 0.5, 2.5),
                               DeformationParams(0.6, 1.5, 0.3), DeformationParams(2.0, -1.0, 0.7)])
def test_ck_recurrence_matches_closed_forms(p):
    ck, closed = ck_coefficients(3, p), closed_ck(p)
    assert ck[0] == pytest.approx(1 / q_number(p.beta, p), rel=1e-14)
    for u, v in zip(ck, closed):
        assert abs(u - v) <= 1e-12 * max(1.0, abs(v))


def test_ck_classical_limit():
    c = ck_coefficients(3, NEAR_ONE)
    assert c[0] == pytest.approx(1.0, abs=1e-6)
    assert abs(c[1]) < 1e-6 and abs(c[2]) < 1e-6


def test_ck_generate_exponential(params):
    c = ck_coefficients(30, params)
    x = 0.3
    assert math.exp(sum(ck * x ** (k + 1) for k, ck in enumerate(c))) == pytest.approx(
        deformed_exp(x, params), rel=1e-12)


def test_analytic_box_number_at_integers(params_generic):
    for n in range(6):
        for s in (1, -1):
            assert box_number_analytic(n, s, params_generic) == pytest.approx(
                box_number(n, params_generic), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("p", [DeformationParams(1.3, 2.0, 1.0), DeformationParams(1.7, 0.8, 0.55)])
def test_pole_weight_from_epsilon_limit(p):
    eps = 1e-6
    plus, minus = epsilon_limit_check(eps, p)
    avg = ((eps / plus) + (eps / minus)).real / 2
    assert avg == pytest.approx(pole_weight(p), rel=1e-4)
    fp, fm = epsilon_limit_first_order(eps, p)
    assert abs(plus - fp) < 1e-10 and abs(minus - fm) < 1e-10
    with pytest.raises(ValueError):
        epsilon_limit_check(0.0, p)


def test_pole_weight_at_half_alpha():
    p = DeformationParams(1.4, 2.0, 1.0)
    expected = 1 / (p.alpha * p.double_bracket(0.0) * p.ln_q / (p.q - 1 / p.q))
    assert pole_weight(p) == pytest.approx(expected, rel=1e-14)


def test_gamma_residue(params_generic):
    p = params_generic
    assert gamma_residue(0, p) == pytest.approx(pole_weight(p), rel=1e-15)
    assert gamma_residue(1, p) == pytest.approx(pole_weight(p) / box_number(1, p.reflected()), rel=1e-14)
    for n in range(5):
        assert gamma_residue_from_iteration(n, 1e-7, p) == pytest.approx(gamma_residue(n, p), rel=1e-5)


def test_gamma_residue_classical():
    p = DeformationParams(1.0 + 1e-7, 2.0, 1.0)
    for n in range(6):
        assert gamma_residue(n, p) == pytest.approx((-1) ** n / math.factorial(n), rel=1e-6)

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genboson.coeffring import ExpPoly, PowerCapError
from genboson.qspecial import DeformationParams, q_number

LAMS = [0j, 0.5 + 0j, -0.5 + 0j, 1j * math.pi, 0.2 - 1j * math.pi]

coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
term = st.tuples(st.integers(0, 3), st.sampled_from(LAMS), coeff)
exppoly = st.lists(term, max_size=4).map(lambda ts: ExpPoly([((p, lam), c) for p, lam, c in ts]))
point = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False)


def close(p, q, tol=1e-12):
    return p.allclose(q, tol)


def test_trivial_products():
    lam = 0.7 - 0.2j
    t = ExpPoly.t()
    assert t * ExpPoly.exp(lam) == ExpPoly.monomial(1, lam)
    assert close(ExpPoly.exp(lam) * ExpPoly.exp(-lam), ExpPoly.constant(1))
    assert (t + 1) ** 2 == ExpPoly.poly([1, 2, 1])


def test_shift_examples():
    lam = 0.3 + 1j
    assert ExpPoly.t().shift(1) == ExpPoly.poly([1, 1])
    assert close(ExpPoly.exp(lam).shift(1), ExpPoly.exp(lam, cmath.exp(lam)))
    p = ExpPoly.monomial(1, lam)
    assert close(p.shift(0.4 - 2j).shift(-0.4 + 2j), p)


def test_taylor_coefficients():
    lam = 0.8 + 0.1j
    assert ExpPoly.exp(lam).taylor_coefficients(2) == pytest.approx([1, lam, lam ** 2 / 2], rel=1e-15)
    assert ExpPoly.t().taylor_coefficients(2) == pytest.approx([0, 1, 0])


def test_taylor_of_qbracket_matches_finite_difference():
    params = DeformationParams(1.3, 2.0, 1.0)
    p = ExpPoly.qbracket(params.alpha, 0.0, params)
    h = 1e-5
    fd = (q_number(params.alpha * h, params) - q_number(-params.alpha * h, params)) / (2 * h)
    assert p.taylor_coefficients(1)[1] == pytest.approx(fd, rel=1e-9)


def test_eval_examples():
    assert ExpPoly.monomial(2).eval(3) == pytest.approx(9)
    ratio = 0.37
    for n in range(4):
        assert ExpPoly.exp(1j * math.pi).eval(n + ratio) == pytest.approx(
            (-1) ** n * cmath.exp(1j * math.pi * ratio), abs=1e-14)


def test_canonical_sum_eval_matches_terms():
    parts = [ExpPoly.monomial(p, lam, 0.3 + p) for p in range(3) for lam in LAMS]
    total = ExpPoly()
    for part in parts:
        total = total + part
    z = 0.4 - 0.3j
    assert total.eval(z) == pytest.approx(sum(part.eval(z) for part in parts), abs=1e-14)


def test_power_cap():
    with pytest.raises(PowerCapError):
        ExpPoly.monomial(65)
    with pytest.raises(PowerCapError):
        ExpPoly.monomial(40) * ExpPoly.monomial(40)


def test_derivative_and_integrate():
    p = ExpPoly([((2, 0.5), 1.0), ((1, 0j), 3.0), ((0, 1j), -2.0)])
    assert close(p.integrate().derivative(), p)


@settings(max_examples=60, deadline=None)
@given(exppoly, exppoly, exppoly)
def test_ring_laws(a, b, c):
    assert close(a * (b * c), (a * b) * c)
    assert close(a * (b + c), a * b + a * c)
    assert close(a * b, b * a)
    assert close(a + b, b + a)


@settings(max_examples=60, deadline=None)
@given(exppoly, point, point)
def test_shift_composition(p, s1, s2):
    assert close(p.shift(s1 + s2), p.shift(s1).shift(s2), 1e-10)


@settings(max_examples=60, deadline=None)
@given(exppoly, exppoly, point)
def test_eval_is_multiplicative(a, b, z):
    lhs, rhs = (a * b).eval(z), a.eval(z) * b.eval(z)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))

import math

import numpy as np
import pytest

from genboson.coherent import (MeasureDivergence, RadialMeasure, build_coherent, deformed_exp_accurate, eigen_residual,
                               measure_F, moment_integral, moment_table, overlap, overlap_closed, positivity_scan,
                               resolution_check)
from genboson.qspecial import DeformationParams, box_factorial, deformed_exp, pole_weight

CLASSICAL = DeformationParams(1 + 1e-7, 2.0, 1.0)
DEFORMED = DeformationParams(1.2, 2.0, 1.0)


def test_vacuum_state(params):
    st = build_coherent(0.0, 6, params)
    assert st.coefficients == pytest.approx(np.eye(6)[0])


def test_normalization_and_eigen(params):
    st = build_coherent(0.7 + 0.2j, 24, params)
    assert np.vdot(st.coefficients, st.coefficients).real == pytest.approx(1 - st.tail_mass, abs=1e-14)
    assert st.tail_mass < 1e-12
    assert eigen_residual(st, params) <= st.tail_bound + 1e-15


def test_eigen_residual_is_last_component(params):
    st = build_coherent(1.1, 6, params)
    assert eigen_residual(st, params) == pytest.approx(st.tail_bound, rel=1e-12)


def test_overlaps(params):
    z1, z2 = 0.3 - 0.4j, 0.5 + 0.1j
    assert overlap(z1, z1, 30, params) == pytest.approx(1, abs=1e-12)
    assert overlap(0, z2, 30, params) == pytest.approx(1 / math.sqrt(deformed_exp(abs(z2) ** 2, params)), rel=1e-12)
    assert overlap(z1, z2, 30, params) == pytest.approx(np.conj(overlap(z2, z1, 30, params)), abs=1e-15)
    assert overlap(z1, z2, 30, params) == pytest.approx(overlap_closed(z1, z2, params), abs=1e-12)


def test_accurate_exponential_matches_series(params):
    for x in (-3.0, -0.5, 0.0, 1.0, 4.0):
        assert deformed_exp_accurate(x, params) == pytest.approx(deformed_exp(x, params), rel=1e-10, abs=1e-13)


def test_measure_classical_limit():
    m = RadialMeasure(CLASSICAL)
    assert m.prefactor == pytest.approx(2, rel=1e-6)
    for rho in (0.0, 0.5, 1.7, 3.0):
        assert m.F(rho) == pytest.approx(2 * math.exp(-rho * rho), rel=1e-5, abs=1e-14)
        # density times d^2ζ = ρ dρ dθ/(2π) is the Glauber measure ρ dρ dθ/π
        assert m.density(rho) == pytest.approx(2.0, rel=1e-5)


def test_measure_at_origin(params):
    assert measure_F(0.0, params) == pytest.approx(2 * pole_weight(params), rel=1e-15)


def test_prefactor_at_half_alpha():
    p = DeformationParams(1.4, 2.0, 1.0)
    expected = 2 / (p.alpha * p.double_bracket(0.0) * p.ln_q / (p.q - 1 / p.q))
    assert RadialMeasure(p).prefactor == pytest.approx(expected, rel=1e-14)


def test_classical_moments():
    for row in moment_table(CLASSICAL, 8):
        assert row.factorial == pytest.approx(math.factorial(row.n), rel=1e-5)
        assert row.ratio == pytest.approx(1, abs=1e-6)


def test_classical_resolution():
    assert resolution_check(CLASSICAL, 8) < 1e-5


def test_moment_zero_classical():
    value, _ = moment_integral(0, CLASSICAL)
    assert value == pytest.approx(1, abs=1e-9)


def test_deformed_moment_diverges():
    # the measure function grows and changes sign at q = 1.2; this is reported, not integrated
    with pytest.raises(MeasureDivergence) as info:
        moment_integral(0, DEFORMED)
    assert info.value.radius == 12.0 and info.value.peak > 1e6


@pytest.mark.xfail(strict=True, raises=MeasureDivergence,
                   reason="exp_{-alpha,beta-alpha}(rho^2) does not decay at q=1.2")
def test_deformed_moments_match_factorials():
    for n in range(9):
        value, _ = moment_integral(n, DEFORMED)
        assert value / box_factorial(n, DEFORMED) == pytest.approx(1, abs=1e-6)


def test_positivity_classical():
    vmin, _, _ = positivity_scan(CLASSICAL)
    assert vmin > 0


@pytest.mark.xfail(strict=True, reason="exp_{2,1}(-10) is about -0.0030 at q=1.2")
def test_positivity_deformed():
    vmin, _, _ = positivity_scan(DEFORMED)
    assert vmin > 0


def test_positivity_on_moderate_range(params):
    vmin, _, _ = positivity_scan(params, np.linspace(-3, 10, 131))
    assert vmin > 0

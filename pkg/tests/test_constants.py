import math

import pytest

from app.constants import (
    a_constant,
    a_objective,
    critical_line_exponent,
    d_over_spade,
    dickman_moment_closed,
    explicit_zeta_bound,
    first_proof_constant,
    gal_constant,
    golden_section_max,
    spade,
    spade_bounds,
    spade_objective,
    spectral_constant,
    strip_exponent,
    zeta_deriv_upper_bound,
)
from app.errors import DomainError, PrecisionError
from app.numtheory import EULER_GAMMA, dickman_moment


@pytest.fixture(scope="module")
def spade_value():
    return spade(1e-6)


def test_golden_section_max():
    lo, hi = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 2.0, 1e-9)
    assert hi - lo <= 1e-9
    assert lo <= 0.3 <= hi


def test_spade_bracket(spade_value):
    assert 0.14149 < spade_value.lower <= spade_value.upper < 0.14151
    assert spade_value.width <= 1e-6
    assert spade_value.argmax == pytest.approx(0.31, abs=0.01)
    assert spade_objective(spade_value.argmax) == pytest.approx(0.1415, abs=2e-5)


def test_spade_bounds_bracket_objective():
    for x in (0.1, 0.31, 0.7, 1.5):
        exact = spade_objective(x, terms=200)
        for K in range(3, 7):
            lower, upper = spade_bounds(x, K)
            assert lower <= exact <= upper


def test_spade_refuses_tiny_tolerance():
    with pytest.raises(PrecisionError):
        spade(1e-13)


@pytest.mark.parametrize("ell, expected", [(1, 27.6), (2, 861.5), (3, 43087)])
def test_a_constant(ell, expected):
    result = a_constant(ell)
    assert result.normalized == pytest.approx(expected, rel=0.005)
    assert abs(2 * result.A_star * math.exp(2 * ell * result.A_star) - 1) < 1e-10
    for step in (1e-3, -1e-3):
        assert a_objective(result.A_star + step, ell) >= result.a


def test_a_constant_growth():
    result = a_constant(50)
    slope = math.log(result.normalized) / (2 * 50 * math.log(50))
    assert 0.8 <= slope <= 1.2


@pytest.mark.parametrize("ell, expected", [(1, 15.2), (2, 84.6), (3, 531.5)])
def test_first_proof_constant(ell, expected):
    result = first_proof_constant(ell)
    assert result.coeff_in_e_gamma_units == pytest.approx(expected, rel=0.01)
    assert 2 * result.A_star * math.exp(2 * result.A_star) == pytest.approx(ell, rel=1e-12)


@pytest.mark.parametrize("ell, expected", [(1, 22.4), (2, 50.4), (3, 180.0)])
def test_d_over_spade(spade_value, ell, expected):
    result = d_over_spade(ell, spade_value)
    assert result.lower <= result.value <= result.upper
    assert result.value == pytest.approx(expected, rel=0.01)


def test_d_over_spade_from_dickman_table(spade_value):
    Y = dickman_moment(2).value
    assert Y == pytest.approx(dickman_moment_closed(2), rel=1e-3)
    assert d_over_spade(2, spade_value, Y=Y).value == pytest.approx(50.4, rel=0.01)


def test_d_over_spade_domain(spade_value):
    with pytest.raises(DomainError):
        d_over_spade(4, spade_value)


def test_strip_exponent():
    assert strip_exponent(0.75) == pytest.approx(19 / 6)
    assert strip_exponent(2 / 3) == pytest.approx(2.0)
    assert strip_exponent(0.5 + 1e-9) == pytest.approx(0.5, abs=1e-7)
    for bad in (0.5, 1.0, 0.2):
        with pytest.raises(DomainError):
            strip_exponent(bad)


def test_asymptotic_constants():
    assert gal_constant() == pytest.approx(6 * math.exp(2 * EULER_GAMMA) / math.pi ** 2)
    assert spectral_constant(1.0) < spectral_constant(2.0)
    assert critical_line_exponent() == pytest.approx(math.log(2) / 2)
    assert explicit_zeta_bound(3.0) == pytest.approx(2 * math.exp(EULER_GAMMA) * (3 - math.log(2) + 0.5 + 1 / 3))
    assert zeta_deriv_upper_bound(2, 3.0) == pytest.approx(2 * math.exp(EULER_GAMMA) * 10 * 27)

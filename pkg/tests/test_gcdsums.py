import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import linalg

from app.config import reset_settings
from app.errors import DomainError, ResourceError
from app.galsets import gal_divisor_set
from app.gcdsums import (
    diagonal_sum,
    gcd_matrix,
    gcd_sum,
    log_gcd_sum,
    log_gcd_sum_tail,
    modified_log_gcd_sum,
    normalized_log_gcd,
    quadratic_form,
    spectral_norm,
)
from app.numtheory import IntegerSet
from app.schemas import GcdSumKind

from .conftest import random_sets


def brute_gcd_sum(values, sigma):
    return math.fsum((math.gcd(m, n) ** 2 / (m * n)) ** sigma for m in values for n in values)


@pytest.mark.parametrize("values, expected", [([1], 1), ([1, 2], 3), ([1, 2, 3, 6], 8)])
@pytest.mark.parametrize("strategy", ["auto", "pairs"])
def test_gcd_sum_small(values, expected, strategy):
    result = gcd_sum(IntegerSet.from_ints(values), 1.0, strategy=strategy)
    assert result.value_exact == Fraction(expected)
    assert result.value_real == pytest.approx(expected, rel=1e-14)
    assert result.kind == GcdSumKind.plain


def test_gcd_sum_auto_uses_lattice_on_boxes(divisors_of_6):
    assert gcd_sum(divisors_of_6, 1.0).strategy == "lattice"
    assert gcd_sum(IntegerSet.from_ints([1, 2, 3]), 1.0).strategy == "pairs"


def test_lattice_rejects_non_box():
    with pytest.raises(DomainError):
        gcd_sum(IntegerSet.from_ints([1, 2, 3]), 1.0, strategy="lattice")


def test_gcd_sum_matches_brute_force():
    for M in random_sets(11, 30, 25, 500):
        for sigma in (0.5, 1.0, 2.0):
            assert gcd_sum(M, sigma).value_real == pytest.approx(brute_gcd_sum(M.values, sigma), rel=1e-10)


def test_exact_agrees_with_real():
    for M in random_sets(3, 30, 30, 1000):
        result = gcd_sum(M, 1.0)
        assert float(result.value_exact) == pytest.approx(result.value_real, rel=1e-10)


def test_non_integer_sigma_has_no_exact_value():
    assert gcd_sum(IntegerSet.from_ints([2, 3]), 0.5).value_exact is None


@pytest.mark.parametrize("r, b", [(2, 3), (3, 2), (1, 5), (2, 4)])
@pytest.mark.parametrize("sigma", [1.0, 0.7, 2.0])
def test_lattice_agrees_with_pairs(r, b, sigma):
    M = gal_divisor_set(r, b)
    lattice = gcd_sum(M, sigma, strategy="lattice")
    pairs = gcd_sum(M, sigma, strategy="pairs")
    assert lattice.value_real == pytest.approx(pairs.value_real, rel=1e-12)
    assert lattice.value_exact == pairs.value_exact


def test_log_gcd_sum_small():
    assert log_gcd_sum(IntegerSet.from_ints([1]), 1.0, 1.0).value_real == 0.0
    expected = 2 * math.log(2) * math.log(3) / 6
    assert log_gcd_sum(IntegerSet.from_ints([2, 3]), 1.0, 1.0).value_real == pytest.approx(expected, rel=1e-14)


def test_log_gcd_sum_at_ell_zero_is_gcd_sum():
    for M in random_sets(5, 10, 20, 300):
        plain = gcd_sum(M, 1.0, strategy="pairs")
        logged = log_gcd_sum(M, 1.0, 0.0)
        assert logged.value_exact == plain.value_exact
        assert logged.value_real == pytest.approx(plain.value_real, rel=1e-14)


def test_log_gcd_sum_has_no_exact_value():
    assert log_gcd_sum(IntegerSet.from_ints([2, 3]), 1.0, 1.0).value_exact is None


def test_normalized_log_gcd(divisors_of_6):
    assert normalized_log_gcd(divisors_of_6, 1.0, 1.0) == pytest.approx(
        log_gcd_sum(divisors_of_6, 1.0, 1.0).value_real / 4
    )


def test_modified_log_gcd_sum():
    expected = 2 * math.log(6) ** 2 / 6
    assert modified_log_gcd_sum(IntegerSet.from_ints([2, 3]), 1.0).value_real == pytest.approx(expected, rel=1e-14)


def test_modified_at_ell_zero(divisors_of_6):
    assert modified_log_gcd_sum(divisors_of_6, 0.0).value_exact == Fraction(8)


@pytest.mark.parametrize("ell", [0.5, 1.0, 2.0])
def test_log_sum_below_modified(ell):
    # (ab)^ell <= ((a + b)^2 / 4)^ell
    for M in random_sets(17, 40, 30, 1000):
        lhs = log_gcd_sum(M, 1.0, ell).value_real
        rhs = 4.0 ** -ell * modified_log_gcd_sum(M, ell).value_real
        assert lhs <= rhs * (1 + 1e-12)


def test_diagonal_sum(divisors_of_6):
    assert diagonal_sum(IntegerSet.from_ints([2, 3]), 0.5).value_real == pytest.approx(2.0)
    assert diagonal_sum(IntegerSet.from_ints([1, 2]), 1.0).value_exact == Fraction(3)
    assert diagonal_sum(divisors_of_6, 1.0).value_exact == Fraction(23, 3)


def test_diagonal_below_full_sum():
    for M in random_sets(23, 20, 25, 400):
        assert diagonal_sum(M, 1.0).value_real <= gcd_sum(M, 1.0).value_real * (1 + 1e-12)


@pytest.mark.parametrize("kind", ["plain", "log", "modified", "diagonal"])
def test_monotone_under_inclusion(kind):
    small = IntegerSet.from_ints([1, 2, 3])
    big = IntegerSet.from_ints([1, 2, 3, 6, 10])
    evaluate = {
        "plain": lambda M: gcd_sum(M, 1.0, strategy="pairs").value_real,
        "log": lambda M: log_gcd_sum(M, 1.0, 1.0).value_real,
        "modified": lambda M: modified_log_gcd_sum(M, 1.0).value_real,
        "diagonal": lambda M: diagonal_sum(M, 1.0).value_real,
    }[kind]
    assert small.issubset(big)
    assert evaluate(small) <= evaluate(big)


def test_tail_vanishes_for_large_cutoff(divisors_of_6):
    assert log_gcd_sum_tail(divisors_of_6, 1.0, 1.0, 10**6) == 0.0
    total = log_gcd_sum(divisors_of_6, 1.0, 1.0).value_real
    assert log_gcd_sum_tail(divisors_of_6, 1.0, 1.0, 1) == pytest.approx(total, rel=1e-14)


def test_pair_cap(monkeypatch, divisors_of_6):
    monkeypatch.setenv("GCDZETA_PAIR_CAP", "3")
    reset_settings()
    with pytest.raises(ResourceError):
        log_gcd_sum(divisors_of_6, 1.0, 1.0)
    with pytest.raises(ResourceError):
        gcd_sum(divisors_of_6, 1.0, strategy="pairs")
    assert gcd_sum(divisors_of_6, 1.0).value_exact == Fraction(8)


def test_gcd_matrix_entries():
    G = gcd_matrix(IntegerSet.from_ints([2, 3, 4]), 1.0).entries
    expected = np.array([[1, 1 / 6, 1 / 2], [1 / 6, 1, 1 / 12], [1 / 2, 1 / 12, 1]])
    assert np.allclose(G, expected, rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_gcd_matrix_positive_semidefinite(alpha):
    for M in random_sets(29, 20, 50, 2000):
        assert linalg.eigvalsh(gcd_matrix(M, alpha).entries).min() >= -1e-9


@pytest.mark.parametrize("values, expected", [([1], 1.0), ([1, 2], 1.5), ([1, 2, 3, 6], 2.0)])
def test_spectral_norm(values, expected):
    assert spectral_norm(IntegerSet.from_ints(values), 1.0).lambda_max == pytest.approx(expected, rel=1e-9)


def test_spectral_norm_matches_eigvalsh():
    for M in random_sets(31, 10, 40, 1000):
        lam = spectral_norm(M, 0.5).lambda_max
        assert lam == pytest.approx(linalg.eigvalsh(gcd_matrix(M, 0.5).entries).max(), rel=1e-8)


def test_quadratic_form_uniform():
    for M in random_sets(37, 10, 30, 500):
        uniform = quadratic_form(M, 1.0)
        assert uniform == pytest.approx(gcd_sum(M, 1.0).value_real / len(M), rel=1e-12)
        assert uniform <= spectral_norm(M, 1.0).lambda_max * (1 + 1e-9)


def test_spectral_cap(monkeypatch, divisors_of_6):
    monkeypatch.setenv("GCDZETA_SPECTRAL_CAP", "2")
    reset_settings()
    with pytest.raises(ResourceError):
        spectral_norm(divisors_of_6, 1.0)

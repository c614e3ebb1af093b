import math
import random
from fractions import Fraction

import mpmath
import pytest

from app.bell import (
    complete_bell,
    deriv_ratio_by_induction,
    deriv_ratio_constant,
    faa_di_bruno_zeta,
    partial_bell,
    zeta_deriv_bound_constant,
    zeta_log_derivs_dirichlet,
)
from app.errors import DomainError


def test_partial_bell_small():
    x1, x2 = Fraction(2, 3), Fraction(-5, 7)
    assert partial_bell(3, 2, [x1, x2]) == 3 * x1 * x2
    assert partial_bell(4, 1, [1, 2, 3, 4]) == 4
    assert partial_bell(4, 4, [Fraction(1, 2)]) == Fraction(1, 16)


def test_partial_bell_arity():
    with pytest.raises(DomainError):
        partial_bell(4, 2, [1, 2])
    with pytest.raises(DomainError):
        partial_bell(3, 4, [1, 2, 3])


def test_bell_numbers():
    assert [complete_bell(n, [1] * n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_complete_bell_recurrence():
    rng = random.Random(41)
    for _ in range(20):
        xs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(9)]
        for n in range(8):
            rhs = sum(math.comb(n, i) * complete_bell(n - i, xs) * xs[i] for i in range(n + 1))
            assert complete_bell(n + 1, xs) == rhs


def test_deriv_ratio_constant():
    assert [deriv_ratio_constant(j) for j in range(3)] == [2, 6, Fraction(40, 3)]
    for ell in range(21):
        assert deriv_ratio_by_induction(ell) == deriv_ratio_constant(ell)


def test_zeta_bound_constant():
    assert [zeta_deriv_bound_constant(ell).c for ell in (1, 2, 3)] == [2, 10, Fraction(172, 3)]
    assert zeta_deriv_bound_constant(2).bound_in_e_gamma_units == 20
    values = [zeta_deriv_bound_constant(ell).c for ell in range(1, 7)]
    assert all(a < b for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        zeta_deriv_bound_constant(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_faa_di_bruno_against_mpmath(n):
    log_derivs = zeta_log_derivs_dirichlet(3, n)
    expected = complex(mpmath.zeta(3, 1, n) / mpmath.zeta(3))
    assert abs(faa_di_bruno_zeta(n, log_derivs) - expected) <= 1e-8 * abs(expected)


def test_dirichlet_needs_re_s_above_one():
    with pytest.raises(DomainError):
        zeta_log_derivs_dirichlet(1, 2)

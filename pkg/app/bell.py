"""Bell polynomials over exact rationals and the derivative-bound constants built from them."""
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Sequence

import numpy as np
from sympy.utilities.iterables import partitions

from app.errors import DomainError
from app.numtheory import prime_powers_up_to
from app.schemas import ZetaBoundConstant


@lru_cache(maxsize=256)
def _index_sequences(n: int, k: int) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """(coefficient, ((i, j_i), ...)) for every j with sum j_i = k and sum i j_i = n."""
    out = []
    for parts in partitions(n, m=k):
        if sum(parts.values()) != k:
            continue
        multiplicities = tuple(sorted(parts.items()))
        denominator = math.prod(math.factorial(j) * math.factorial(i) ** j for i, j in multiplicities)
        out.append((math.factorial(n) // denominator, multiplicities))
    return tuple(out)


def _evaluate(n: int, k: int, xs: Sequence[Number]):
    total = 0
    for coefficient, multiplicities in _index_sequences(n, k):
        term = coefficient
        for i, j in multiplicities:
            term = term * xs[i - 1] ** j
        total = total + term
    return total


def partial_bell(n: int, k: int, xs: Sequence) -> Fraction:
    if n < 1 or not 1 <= k <= n:
        raise DomainError(f"partial Bell polynomial needs 1 <= k <= n, got n={n}, k={k}")
    if len(xs) < n - k + 1:
        raise DomainError(f"B_{{{n},{k}}} needs {n - k + 1} arguments, got {len(xs)}")
    return Fraction(_evaluate(n, k, [Fraction(x) for x in xs]))


def complete_bell(n: int, xs: Sequence) -> Fraction:
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if len(xs) < n:
        raise DomainError(f"B_{n} needs {n} arguments, got {len(xs)}")
    values = [Fraction(x) for x in xs]
    return sum((Fraction(_evaluate(n, k, values)) for k in range(1, n + 1)), Fraction(1 if n == 0 else 0))


def faa_di_bruno_zeta(n: int, log_derivs: Sequence[complex]) -> complex:
    """zeta^(n)/zeta from (zeta'/zeta)^(j), j = 0..n-1, as B_n of those values."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if len(log_derivs) < n:
        raise DomainError(f"need {n} log-derivative values, got {len(log_derivs)}")
    values = [complex(v) for v in log_derivs]
    return complex(sum(_evaluate(n, k, values) for k in range(1, n + 1)))


def zeta_log_derivs_dirichlet(s: complex, n: int, x: float = 1e6) -> list[complex]:
    """(zeta'/zeta)^(j)(s) = -sum_{k<=x} Lambda(k) (-log k)^j k^-s for j = 0..n-1."""
    if complex(s).real <= 1:
        raise DomainError(f"Dirichlet series needs Re(s) > 1, got {s}")
    k, lam = prime_powers_up_to(x)
    log_k = np.log(k)
    base = lam * np.exp(-complex(s) * log_k)
    values = []
    for j in range(n):
        terms = -base * (-log_k) ** j
        values.append(complex(math.fsum(terms.real), math.fsum(terms.imag)))
    return values


def deriv_ratio_constant(ell: int) -> Fraction:
    """2^{ell+2} - 2^{ell+1}/(ell+1)."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    return Fraction(2 ** (ell + 2)) - Fraction(2 ** (ell + 1), ell + 1)


def deriv_ratio_by_induction(ell: int) -> Fraction:
    # a_0 = 2, a_{j+1} = 2 a_j + 2^{j+2} / ((j+1)(j+2))
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    a = Fraction(2)
    for j in range(ell):
        a = 2 * a + Fraction(2 ** (j + 2), (j + 1) * (j + 2))
    return a


def zeta_deriv_bound_constant(ell: int) -> ZetaBoundConstant:
    """c(ell) = B_ell(a_0, ..., a_{ell-1}) and the bound 2 c(ell) in units of e^gamma (log log t)^{ell+1}."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    c = complete_bell(ell, [deriv_ratio_constant(j) for j in range(ell)])
    return ZetaBoundConstant(ell=ell, c=c, bound_in_e_gamma_units=2 * c)

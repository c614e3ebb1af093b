"""Primes, factored integers, prime sums and the Dickman function."""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

import mpmath
import numpy as np
import sympy
from scipy import integrate, special

from app.config import get_settings
from app.errors import DomainError, ParseError, PrecisionError, ResourceError, ValidationError
from app.schemas import DickmanMoment, MertensResult, PrimeRatioBounds

logger = logging.getLogger(__name__)

EULER_GAMMA_DIGITS = "0.57721566490153286060651209008240243104215933593992"
PI_DIGITS = "3.1415926535897932384626433832795028841971693993751"

EULER_GAMMA = float(EULER_GAMMA_DIGITS)
PI = float(PI_DIGITS)


def zeta2_mp(dps: int = 50) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return mpmath.mpf(PI_DIGITS) ** 2 / 6


ZETA2 = float(zeta2_mp())


# ---------------------------------------------------------------------------
# factored integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer kept as ``((p1, e1), (p2, e2), ...)`` with p ascending."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValidationError(f"bad factorisation {self.factors!r}")
            last = p

    @classmethod
    def from_mapping(cls, factors: Mapping[int, int]) -> "FactoredInteger":
        return cls(tuple(sorted((int(p), int(e)) for p, e in factors.items() if e)))

    @classmethod
    def from_int(cls, n: int) -> "FactoredInteger":
        n = int(n)
        if n < 1:
            raise DomainError(f"{n} is not a positive integer")
        return cls.from_mapping(sympy.factorint(n))

    @classmethod
    def from_literal(cls, text: str) -> "FactoredInteger":
        """Parse ``p1^e1*p2^e2*...``; bases must be prime, exponents >= 1."""
        exps: dict[int, int] = {}
        for chunk in text.strip().split("*"):
            base, sep, exp = chunk.strip().partition("^")
            if not sep or not base.isdigit() or not exp.isdigit():
                raise ParseError(f"malformed factor {chunk.strip()!r}")
            p, e = int(base), int(exp)
            if not sympy.isprime(p):
                raise ValidationError(f"base {p} is not prime")
            if e < 1:
                raise ValidationError(f"exponent of {p} must be >= 1")
            exps[p] = exps.get(p, 0) + e
        return cls.from_mapping(exps)

    def to_literal(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" for p, e in self.factors)

    @cached_property
    def value(self) -> int:
        return math.prod(p ** e for p, e in self.factors)

    @cached_property
    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def log(self) -> float:
        return math.fsum(e * math.log(p) for p, e in self.factors)

    def gcd(self, other: "FactoredInteger") -> "FactoredInteger":
        b = other.as_dict
        return FactoredInteger.from_mapping({p: min(e, b[p]) for p, e in self.factors if p in b})

    def lcm(self, other: "FactoredInteger") -> "FactoredInteger":
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = max(merged.get(p, 0), e)
        return FactoredInteger.from_mapping(merged)

    def divides(self, other: "FactoredInteger") -> bool:
        b = other.as_dict
        return all(b.get(p, 0) >= e for p, e in self.factors)

    def __mul__(self, other: "FactoredInteger") -> "FactoredInteger":
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredInteger.from_mapping(merged)

    def __int__(self) -> int:
        return self.value

    def __lt__(self, other: "FactoredInteger") -> bool:
        return self.value < other.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class IntegerSet:
    """Distinct positive integers in increasing order (the canonical summation order)."""

    elements: tuple[FactoredInteger, ...]
    label: str = ""
    duplicates: int = field(default=0, compare=False)

    def __post_init__(self):
        values = [x.value for x in self.elements]
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ValidationError("IntegerSet elements must be distinct and increasing")

    @classmethod
    def from_elements(cls, items: Iterable[FactoredInteger], label: str = "") -> "IntegerSet":
        items = list(items)
        unique = {x.value: x for x in items}
        dupes = len(items) - len(unique)
        return cls(tuple(unique[v] for v in sorted(unique)), label, dupes)

    @classmethod
    def from_ints(cls, values: Iterable[int], label: str = "") -> "IntegerSet":
        return cls.from_elements((FactoredInteger.from_int(v) for v in values), label)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        value = item.value if isinstance(item, FactoredInteger) else int(item)
        return value in self.value_set

    @cached_property
    def values(self) -> list[int]:
        return [x.value for x in self.elements]

    @cached_property
    def value_set(self) -> frozenset[int]:
        return frozenset(self.values)

    def issubset(self, other: "IntegerSet") -> bool:
        return self.value_set <= other.value_set

    @cached_property
    def exponent_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """(primes, E) with E[i, j] the exponent of primes[j] in element i."""
        primes = sorted({p for x in self.elements for p, _ in x.factors})
        column = {p: j for j, p in enumerate(primes)}
        E = np.zeros((len(self.elements), len(primes)), dtype=np.int32)
        for i, x in enumerate(self.elements):
            for p, e in x.factors:
                E[i, column[p]] = e
        return np.array(primes, dtype=np.int64), E

    @cached_property
    def logs(self) -> np.ndarray:
        return np.array([x.log() for x in self.elements], dtype=np.float64)

    def is_divisor_box(self) -> bool:
        """True when the set is exactly the divisor set of its lcm."""
        if not self.elements:
            return False
        _, E = self.exponent_matrix
        box = math.prod(int(c) + 1 for c in E.max(axis=0)) if E.size else 1
        return box == len(self.elements)


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    # odd-only sieve: index i stands for 2*i + 1
    half = limit // 2 + 1
    is_prime = np.ones(half, dtype=bool)
    is_prime[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if is_prime[i]:
            p = 2 * i + 1
            is_prime[p * p // 2::p] = False
    odd = 2 * np.flatnonzero(is_prime).astype(np.int64) + 1
    primes = np.concatenate(([2], odd[odd <= limit]))
    primes.setflags(write=False)
    logger.debug("sieved %d primes up to %d", primes.size, limit)
    return primes


def primes_up_to(x: float) -> np.ndarray:
    """All primes <= x in ascending order."""
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    cap = get_settings().sieve_cap
    if x >= cap:
        raise ResourceError(f"sieve limit {x:g} exceeds the configured sieve cap", cap)
    return _sieve(int(math.floor(x)))


def first_primes(r: int) -> np.ndarray:
    if r < 0:
        raise DomainError(f"r must be non-negative, got {r}")
    if r == 0:
        return np.array([], dtype=np.int64)
    # p_r < r (log r + log log r) for r >= 6
    bound = 15 if r < 6 else int(r * (math.log(r) + math.log(math.log(r)))) + 1
    return primes_up_to(bound)[:r]


def prime_powers_up_to(x: float) -> tuple[np.ndarray, np.ndarray]:
    """(n, log p) for every prime power n = p^k <= x, sorted by n."""
    primes = primes_up_to(x)
    ns, lams = [], []
    k = 1
    while primes.size and 2.0 ** k <= x:
        base = primes[primes.astype(np.float64) ** k <= x]
        ns.append(base.astype(np.float64) ** k)
        lams.append(np.log(base.astype(np.float64)))
        k += 1
    if not ns:
        return np.array([]), np.array([])
    n = np.concatenate(ns)
    lam = np.concatenate(lams)
    order = np.argsort(n, kind="stable")
    return n[order], lam[order]


def mertens_product(x: float) -> MertensResult:
    """prod_{p<=x} (1-1/p)^{-1} and its ratio to e^gamma log x."""
    if x < 2:
        raise DomainError(f"mertens_product needs x >= 2, got {x}")
    p = primes_up_to(x).astype(np.float64)
    product = 1.0
    for factor in p / (p - 1.0):
        product *= float(factor)
    return MertensResult(product=product, ratio_to_asymptotic=product / (math.exp(EULER_GAMMA) * math.log(x)))


def chebyshev_log_sum(x: float, sigma: float, ell: int, weighted: bool = False) -> float:
    """sum_{n<=x} (log n)^ell Lambda(n) / n^sigma, times log(x/n) when weighted."""
    if x < 1:
        raise DomainError(f"chebyshev_log_sum needs x >= 1, got {x}")
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    n, lam = prime_powers_up_to(x)
    if n.size == 0:
        return 0.0
    logn = np.log(n)
    terms = lam * np.exp(-sigma * logn)
    if ell:
        terms = terms * logn ** ell
    if weighted:
        terms = terms * (math.log(x) - logn)
    return math.fsum(terms)


def rh_neighbourhood_sum(loglog_t: float, A: float) -> tuple[float, float]:
    """(1-sigma) sum_{n<=(log t)^2} Lambda(n)/n^sigma at sigma = 1 - A/loglog t.

    Returns the value together with its limit e^{2A} - 1.
    """
    if loglog_t <= 0 or A <= 0:
        raise DomainError("loglog_t and A must be positive")
    x = math.exp(2.0 * loglog_t)
    delta = A / loglog_t
    return delta * chebyshev_log_sum(x, 1.0 - delta, 0), math.expm1(2.0 * A)


def _alpha_for(X: float, A: float) -> float:
    if X < 2:
        raise DomainError(f"X must be >= 2, got {X}")
    if A <= 0:
        raise DomainError(f"A must be positive, got {A}")
    alpha = 1.0 - A / math.log(X)
    if alpha <= 0.5:
        raise DomainError(f"alpha = 1 - A/log X = {alpha:.6g} must exceed 1/2 (A < log(X)/2)")
    return alpha


def prime_ratio_sum(X: float, A: float) -> float:
    """sum_{p<=X} log((1-1/p)/(1-p^{-alpha})) with alpha = 1 - A/log X."""
    alpha = _alpha_for(X, A)
    p = primes_up_to(X).astype(np.float64)
    return math.fsum(np.log1p(-1.0 / p) - np.log1p(-(p ** -alpha)))


def exponential_integral_ein(A: float) -> float:
    """Ein(A) = int_0^A (e^u - 1)/u du."""
    if A == 0:
        return 0.0
    return float(special.exp1(A) + EULER_GAMMA + math.log(A)) if A > 0.5 else float(
        sum(A ** k / (k * math.factorial(k)) for k in range(1, 40))
    )


def prime_ratio_bounds(X: float, A: float) -> PrimeRatioBounds:
    alpha = _alpha_for(X, A)
    p = primes_up_to(X).astype(np.float64)
    logp = np.log(p)
    p_alpha = p ** -alpha
    main = (1.0 - alpha) * logp * p_alpha
    return PrimeRatioBounds(
        value=math.fsum(np.log1p(-1.0 / p) - np.log1p(-p_alpha)),
        lower_sum=math.fsum(p_alpha - 1.0 / p),
        upper_sum=math.fsum(main * (1.0 + 1.0 / (p ** alpha - 1.0))),
        upper_main=math.fsum(main),
        target_upper=math.expm1(A),
        target_limit=exponential_integral_ein(A),
    )


def theta_tail_bound(a: float, K: int) -> float:
    """Upper bound for sum_{n>K} e^{-a n^2}, using n^2 >= (K+1)^2 + (2K+3)(n-K-1)."""
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    return math.exp(-a * (K + 1) ** 2) / -math.expm1(-a * (2 * K + 3))


# ---------------------------------------------------------------------------
# Dickman rho
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DickmanTable:
    step: float
    values: np.ndarray = field(repr=False)
    max_u: float

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.values.size) * self.step


@lru_cache(maxsize=4)
def _dickman_values(per_unit: int, units_total: int) -> np.ndarray:
    h = 1.0 / per_unit
    size = units_total + 1
    # log rho, Heun steps on (log rho)'(u) = -rho(u-1) / (u rho(u)); stays positive in the tail
    y = [0.0] * size
    for k in range(per_unit + 1, size):
        slope_prev = -math.exp(y[k - 1 - per_unit] - y[k - 1]) / ((k - 1) * h)
        guess = y[k - 1] + h * slope_prev
        slope = -math.exp(y[k - per_unit] - guess) / (k * h)
        y[k] = y[k - 1] + 0.5 * h * (slope_prev + slope)
    rho = np.exp(np.asarray(y))
    rho.setflags(write=False)
    return rho


def dickman_table(step: float | None = None, max_u: float | None = None) -> DickmanTable:
    settings = get_settings()
    step = settings.dickman_step if step is None else step
    max_u = settings.dickman_max_u if max_u is None else max_u
    if step <= 0 or max_u < 1:
        raise DomainError("Dickman grid needs step > 0 and max_u >= 1")
    per_unit = round(1.0 / step)
    if abs(per_unit * step - 1.0) > 1e-9:
        raise DomainError(f"Dickman step {step} must divide 1")
    values = _dickman_values(per_unit, int(round(max_u * per_unit)))
    return DickmanTable(step=1.0 / per_unit, values=values, max_u=(values.size - 1) / per_unit)


def dickman_rho(u: float, table: DickmanTable | None = None) -> float:
    table = table or dickman_table()
    if u < 0 or u > table.max_u:
        raise DomainError(f"u = {u} outside the Dickman table range [0, {table.max_u}]")
    if u <= 1:
        return 1.0
    return float(np.interp(u, table.grid, table.values))


def dickman_moment(ell: int, table: DickmanTable | None = None, tol: float = 1e-6) -> DickmanMoment:
    """int_0^inf u^ell rho(u) du on the table grid plus a certified tail bound."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    table = table or dickman_table()
    u = table.grid
    value = float(integrate.trapezoid(u ** ell * table.values, u))
    # rho(u) <= 1/Gamma(u+1)
    tail, _ = integrate.quad(
        lambda v: math.exp(ell * math.log(v) - special.gammaln(v + 1.0)), table.max_u, np.inf
    )
    if tail > tol:
        raise PrecisionError(f"Dickman tail {tail:.3g} beyond u={table.max_u} exceeds tolerance {tol:g}")
    return DickmanMoment(ell=ell, value=value, tail_bound=tail)


# ---------------------------------------------------------------------------
# quadrature bound
# ---------------------------------------------------------------------------

def int_limit_bound(alpha: float, A: float) -> float:
    """int_2^{exp(A/(1-alpha))} t^{-alpha} exp(-sqrt(log t)) dt, computed in v = log t."""
    if A <= 0:
        raise DomainError(f"A must be positive, got {A}")
    if not 0.5 <= alpha < 1:
        raise DomainError(f"alpha must lie in [1/2, 1), got {alpha}")
    if alpha < 1.0 - A / math.log(2.0):
        raise DomainError(f"alpha must be >= 1 - A/log 2 = {1 - A / math.log(2):.6g}")
    upper = A / (1.0 - alpha)
    lower = math.log(2.0)
    if upper <= lower:
        return 0.0
    c = 1.0 - alpha
    value, err = integrate.quad(
        lambda v: math.exp(c * v - math.sqrt(v)), lower, upper, epsrel=1e-8, epsabs=0.0, limit=500
    )
    logger.debug("Int(alpha=%g; A=%g) = %.12g (+- %.2g)", alpha, A, value, err)
    return value

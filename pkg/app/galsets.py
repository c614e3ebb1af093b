import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from app.config import get_settings
from app.errors import DomainError, ResourceError
from app.numtheory import EULER_GAMMA, ZETA2, FactoredInteger, IntegerSet, first_primes, primes_up_to
from app.schemas import (
    DiagonalRatio,
    GalAsymptotics,
    GalIdentity,
    GalParameters,
    PrimePowerConstruction,
    ThreeFactorSplit,
)

logger = logging.getLogger(__name__)


def _check_rb(r: int, b: int) -> None:
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if b < 2:
        raise DomainError(f"b must be >= 2, got {b}")


def _integer_alpha(alpha: float) -> int | None:
    return int(alpha) if alpha >= 0 and float(alpha).is_integer() else None


def _log_product(logs) -> float:
    return math.exp(math.fsum(logs))


@dataclass(frozen=True)
class GalConstruction:
    r: int
    b: int
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        _check_rb(self.r, self.b)
        object.__setattr__(self, "primes", tuple(int(p) for p in first_primes(self.r)))

    @property
    def size(self) -> int:
        return self.b ** self.r

    @property
    def top(self) -> FactoredInteger:
        return FactoredInteger(tuple((p, self.b - 1) for p in self.primes))

    def divisor_set(self) -> IntegerSet:
        cap = get_settings().enum_cap
        if self.size > cap:
            raise ResourceError(f"divisor set of size {self.size} exceeds the enumeration cap", cap)
        elements = (
            FactoredInteger(tuple((p, e) for p, e in zip(self.primes, exps) if e))
            for exps in itertools.product(range(self.b), repeat=self.r)
        )
        return IntegerSet.from_elements(elements, label=f"gal(r={self.r}, b={self.b})")


def gal_divisor_set(r: int, b: int) -> IntegerSet:
    return GalConstruction(r, b).divisor_set()


def gal_product_identity(r: int, b: int, alpha: float) -> GalIdentity:
    """prod_{i <= r} (b + 2 sum_{k<b} (b-k) p_i^{-k alpha}) without enumerating the set."""
    _check_rb(r, b)
    primes = first_primes(r).tolist()
    k = np.arange(1, b)
    logs = []
    for p in primes:
        logs.append(math.log(b + 2.0 * math.fsum((b - k) * np.exp(-alpha * k * math.log(p)))))
    exact = None
    a = _integer_alpha(alpha)
    if a is not None:
        exact = Fraction(1)
        for p in primes:
            exact *= b + 2 * sum(Fraction(b - j, p ** (j * a)) for j in range(1, b))
    return GalIdentity(r=r, b=b, alpha=alpha, value=_log_product(logs), value_exact=exact)


def gal_three_factor_split(r: int, b: int, alpha: float) -> ThreeFactorSplit:
    """f1 f2 f3 with b^r f1 f2 f3 equal to the Gál product.

    f1 = prod ((1-1/p)/(1-p^-a))^2, f2 = prod (1-1/p)^-2,
    f3 = prod (1 + 2 sum (1-k/b) p^-ka) (1-p^-a)^2.
    """
    _check_rb(r, b)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    primes = first_primes(r).astype(np.float64)
    k = np.arange(1, b)
    log_p = np.log(primes)
    log_one_minus = np.log1p(-1.0 / primes)
    log_one_minus_alpha = np.log1p(-np.exp(-alpha * log_p))
    inner = np.exp(-alpha * np.outer(log_p, k)) @ (1.0 - k / b)
    split = ThreeFactorSplit(
        f1=_log_product(2.0 * (log_one_minus - log_one_minus_alpha)),
        f2=_log_product(-2.0 * log_one_minus),
        f3=_log_product(np.log1p(2.0 * inner) + 2.0 * log_one_minus_alpha),
    )
    a = _integer_alpha(alpha)
    if a is not None and a > 0:
        f1 = f2 = f3 = Fraction(1)
        for p in first_primes(r).tolist():
            one_minus = 1 - Fraction(1, p)
            one_minus_alpha = 1 - Fraction(1, p ** a)
            f1 *= (one_minus / one_minus_alpha) ** 2
            f2 /= one_minus ** 2
            f3 *= (1 + 2 * sum(Fraction(b - j, b * p ** (j * a)) for j in range(1, b))) * one_minus_alpha ** 2
        split = split.model_copy(update={"f1_exact": f1, "f2_exact": f2, "f3_exact": f3})
    return split


def gal_asymptotic_factors(r: int, b: int, alpha: float) -> GalAsymptotics:
    """f2 against (e^gamma log p_r)^2 and f3 against its b -> oo, alpha = 1 limit 1/zeta(2)."""
    split = gal_three_factor_split(r, b, alpha)
    p_r = float(first_primes(r)[-1])
    mertens = (math.exp(EULER_GAMMA) * math.log(p_r)) ** 2 if p_r > 1 else 1.0
    return GalAsymptotics(f2_over_mertens=split.f2 / mertens, f3=split.f3, f3_target=1.0 / ZETA2)


@dataclass(frozen=True)
class SquarefreeConstruction:
    k: int
    set: IntegerSet = field(repr=False)

    @property
    def size(self) -> int:
        return 2 ** self.k

    def closed_form(self, sigma: float) -> float:
        """2^k prod (1 + p_i^-sigma) = S_sigma of the set."""
        primes = first_primes(self.k).astype(np.float64)
        return _log_product([self.k * math.log(2.0), *np.log1p(primes ** -sigma).tolist()])

    def closed_form_exact(self, sigma: int) -> Fraction:
        value = Fraction(2 ** self.k)
        for p in first_primes(self.k).tolist():
            value *= 1 + Fraction(1, p ** sigma)
        return value


def squarefree_set(k: int) -> SquarefreeConstruction:
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    cap = get_settings().enum_cap
    if 2 ** k > cap:
        raise ResourceError(f"square-free set of size 2^{k} exceeds the enumeration cap", cap)
    primes = first_primes(k).tolist()
    elements = (
        FactoredInteger(tuple((p, 1) for p, used in zip(primes, mask) if used))
        for mask in itertools.product((0, 1), repeat=k)
    )
    return SquarefreeConstruction(k=k, set=IntegerSet.from_elements(elements, label=f"squarefree(k={k})"))


def diagonal_ratio_squarefree(k: int, sigma: float) -> DiagonalRatio:
    """E~_sigma / S_sigma for the square-free construction.

    ``closed_form`` is 2 prod (1 + 1/(2p^s)) / (1 + 1/p^s); counting the
    diagonal once gives ``exact`` = closed_form - prod 1/(1 + p^-s).
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    primes = first_primes(k).astype(np.float64)
    x = primes ** -sigma
    log_ratio = np.log1p(0.5 * x) - np.log1p(x)
    closed = 2.0 * _log_product(log_ratio)
    return DiagonalRatio(k=k, sigma=sigma, closed_form=closed, exact=closed - _log_product(-np.log1p(x)))


def parameters_for_N(N: int) -> GalParameters:
    if N < 100:
        raise DomainError(f"N must be >= 100, got {N}")
    log_n = math.log(N)
    r = int(log_n / math.log(log_n))
    b = max(2, int(round(N ** (1.0 / r))))
    while b ** r > N:
        b -= 1
    while (b + 1) ** r <= N:
        b += 1
    return GalParameters(N=N, r=r, b=b)


def prime_power_construction(x: float, b: int, sigma: float) -> PrimePowerConstruction:
    """K = prod_{p <= x} p^{b-1} and prod_{p <= x} (1 + sum_{k<b} (1-k/b) p^{-k sigma}).

    The factors are prod (1-1/p)/(1-p^-s), prod (1-1/p)^-1 and the remainder.
    """
    if x < 2:
        raise DomainError(f"x must be >= 2, got {x}")
    if b < 2:
        raise DomainError(f"b must be >= 2, got {b}")
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    primes = primes_up_to(x)
    p = primes.astype(np.float64)
    k = np.arange(1, b)
    log_p = np.log(p)
    inner = np.exp(-sigma * np.outer(log_p, k)) @ (1.0 - k / b)
    log_ratio = np.log1p(inner)
    log_one_minus = np.log1p(-1.0 / p)
    log_one_minus_sigma = np.log1p(-np.exp(-sigma * log_p))
    first = log_one_minus - log_one_minus_sigma
    third = log_ratio + log_one_minus_sigma
    K = FactoredInteger(tuple((int(q), b - 1) for q in primes.tolist()))
    return PrimePowerConstruction(
        x=x,
        b=b,
        sigma=sigma,
        K=K,
        K_literal=K.to_literal(),
        ratio=_log_product(log_ratio),
        factors=(_log_product(first), _log_product(-log_one_minus), _log_product(third)),
    )


def prime_power_construction_from_T(T: float, sigma: float) -> PrimePowerConstruction:
    if T <= math.e ** math.e:
        raise DomainError(f"T = {T:g} too small for log log T >= 1")
    loglog = math.log(math.log(T))
    x = math.log(T) / (3.0 * loglog)
    b = int(loglog)
    if x < 2 or b < 2:
        raise DomainError(f"T = {T:g} gives x = {x:.4g}, b = {b}; need x >= 2 and b >= 2")
    return prime_power_construction(x, b, sigma)

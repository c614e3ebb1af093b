import logging
import math
from typing import Callable

from scipy import optimize

from app.bell import zeta_deriv_bound_constant
from app.errors import DomainError, PrecisionError
from app.numtheory import EULER_GAMMA, ZETA2, theta_tail_bound
from app.schemas import AConstant, BracketedConstant, FirstProofConstant

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2

SPADE_PROVENANCE = "spade = max_{0<x<=2} e^-x / (1 + 2 sum_{n>=0} e^{-x n^2}); published bracket (0.14149, 0.14151)"
_SPADE_SEARCH = (0.05, 2.0)
_MAX_TRUNCATION = 60


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Shrink [a, b] around the maximum of a unimodal f until b - a <= tol."""
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
    return (a, d) if yc > yd else (c, b)


def _theta_partial(x: float, K: int) -> float:
    return math.fsum(math.exp(-x * n * n) for n in range(1, K + 1))


def spade_objective(x: float, terms: int = 40) -> float:
    """e^-x / (3 + 2 sum_{n>=1} e^{-x n^2}); the n = 0 term of the series is 1."""
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    return math.exp(-x) / (3.0 + 2.0 * _theta_partial(x, terms))


def spade_bounds(x: float, K: int) -> tuple[float, float]:
    """(lower, upper) on the objective: n <= K plus the tail bound, against n <= K + 2."""
    partial = _theta_partial(x, K)
    lower = math.exp(-x) / (3.0 + 2.0 * (partial + theta_tail_bound(x, K)))
    upper = math.exp(-x) / (3.0 + 2.0 * _theta_partial(x, K + 2))
    return lower, upper


def spade(tol: float = 1e-6) -> BracketedConstant:
    if tol < 1e-12:
        raise PrecisionError(f"tolerance {tol:g} below the supported 1e-12")
    lo, hi = golden_section_max(spade_objective, *_SPADE_SEARCH, tol=tol / 8)
    x_star = 0.5 * (lo + hi)
    for K in range(3, _MAX_TRUNCATION):
        lower, _ = spade_bounds(x_star, K)
        # any maximiser in [lo, hi] is at most e^-lo over the smallest denominator
        upper = math.exp(-lo) / (3.0 + 2.0 * _theta_partial(hi, K + 2))
        if upper - lower <= tol:
            value = min(max(spade_objective(x_star), lower), upper)
            logger.info("spade in [%.12f, %.12f] at x = %.8f (K = %d)", lower, upper, x_star, K)
            return BracketedConstant(lower=lower, upper=upper, value=value, provenance=SPADE_PROVENANCE, argmax=x_star)
    raise PrecisionError(f"spade bracket wider than {tol:g} after {_MAX_TRUNCATION} series terms")


def _bisect_root(h: Callable[[float], float], a: float, b: float) -> float:
    return optimize.bisect(h, a, b, xtol=1e-15, rtol=4 * 2.220446049250313e-16, maxiter=500)


def a_objective(A: float, ell: float) -> float:
    """exp(2 gamma + 2 e^{2 ell A} - 2) / (zeta(2) A^{2 ell})."""
    return math.exp(2 * EULER_GAMMA + 2 * math.exp(2 * ell * A) - 2 - 2 * ell * math.log(A)) / ZETA2


def a_constant(ell: float) -> AConstant:
    """Minimise a_objective over A > 0; the minimiser solves 2 A e^{2 ell A} = 1."""
    if ell <= 0:
        raise DomainError(f"ell must be positive, got {ell}")
    A = _bisect_root(lambda t: 2 * t * math.exp(2 * ell * t) - 1, 0.0, 0.5)
    a = a_objective(A, ell)
    return AConstant(ell=ell, A_star=A, a=a, normalized=a * 4.0 ** -ell)


def first_proof_constant(ell: int) -> FirstProofConstant:
    """2 ell! / A^ell exp(e^{2A} - 1) at the root of 2 A e^{2A} = ell."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    A = _bisect_root(lambda t: 2 * t * math.exp(2 * t) - ell, 0.0, float(ell))
    coeff = 2 * math.factorial(ell) / A ** ell * math.exp(math.expm1(2 * A))
    return FirstProofConstant(ell=ell, A_star=A, coeff_in_e_gamma_units=coeff)


_DICKMAN_CLOSED = {1: 1.0, 2: 1.5, 3: 17.0 / 6.0}


def dickman_moment_closed(ell: int) -> float:
    if ell not in _DICKMAN_CLOSED:
        raise DomainError(f"closed form known only for ell in 1..3, got {ell}")
    return _DICKMAN_CLOSED[ell] * math.exp(EULER_GAMMA)


def d_over_spade(ell: int, spade_val: BracketedConstant, Y: float | None = None) -> BracketedConstant:
    """D_ell / spade with D_ell = Y_ell^2, bracketed through the spade bracket."""
    if ell not in _DICKMAN_CLOSED:
        raise DomainError(f"ell must be 1, 2 or 3, got {ell}")
    Y = dickman_moment_closed(ell) if Y is None else Y
    if Y <= 0 or spade_val.lower <= 0:
        raise DomainError("Y and the spade bracket must be positive")
    D = Y * Y
    return BracketedConstant(
        lower=D / spade_val.upper,
        upper=D / spade_val.lower,
        value=D / spade_val.value,
        provenance=f"D_{ell} / spade with D_{ell} = Y_{ell}^2, Y_{ell} = int_0^oo u^{ell} rho(u) du",
    )


def strip_exponent(sigma0: float) -> float:
    if not 0.5 < sigma0 < 1:
        raise DomainError(f"sigma0 must lie strictly inside (1/2, 1), got {sigma0}")
    return 0.5 + (2 * sigma0 - 1) / (sigma0 * (1 - sigma0))


# asymptotic constants

def spectral_constant(A: float) -> float:
    if A <= 0:
        raise DomainError(f"A must be positive, got {A}")
    return math.exp(2 * EULER_GAMMA + 2 * math.exp(A) - 2) / ZETA2


def gal_constant() -> float:
    return 6 * math.exp(2 * EULER_GAMMA) / math.pi ** 2


def large_value_constant(A: float) -> float:
    return math.exp(EULER_GAMMA + math.expm1(A))


def littlewood_constant() -> float:
    return 2 * math.exp(EULER_GAMMA)


def explicit_zeta_bound(loglog_t: float) -> float:
    if loglog_t <= 0:
        raise DomainError(f"loglog_t must be positive, got {loglog_t}")
    return 2 * math.exp(EULER_GAMMA) * (loglog_t - math.log(2) + 0.5 + 1 / loglog_t)


def critical_line_exponent() -> float:
    return math.log(2) / 2


def zeta_deriv_upper_bound(ell: int, loglog_t: float) -> float:
    c = zeta_deriv_bound_constant(ell).c
    return 2 * math.exp(EULER_GAMMA) * float(c) * loglog_t ** (ell + 1)

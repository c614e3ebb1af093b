"""GCD sums S_sigma(M), their log-weighted variants, and GCD matrices.

Pairs are handled in blocks of rows over the exponent matrix of the set:
for a block of elements m and every n in M the exponent difference
``D = e(m) - e(n)`` gives

    log(m/(m,n)) = clip(D, 0) . log p
    log(n/(m,n)) = clip(-D, 0) . log p
    (m,n)/[m,n]  = exp(-|D| . log p)

so no integer is ever multiplied out.  Exact rational values group pairs by
``|D|`` and add ``count / q^sigma`` once per distinct ``q = [m,n]/(m,n)``.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from tqdm import tqdm

from app.config import get_settings
from app.errors import DomainError, NumericError, ResourceError
from app.numtheory import IntegerSet
from app.schemas import GcdSumKind, GcdSumResult, SpectralResult

logger = logging.getLogger(__name__)

# elements of the (rows, N, primes) difference tensor per block
_BLOCK_BUDGET = 2 * 10**7
_MAX_POWER_ITERATIONS = 10**5


@dataclass(frozen=True)
class GcdMatrix:
    alpha: float
    entries: np.ndarray = field(repr=False)


def _integer_exponent(sigma: float) -> int | None:
    if sigma >= 0 and float(sigma).is_integer():
        return int(sigma)
    return None


def _check_pair_cap(M: IntegerSet) -> None:
    cap = get_settings().pair_cap
    if len(M) > cap:
        raise ResourceError(f"set of {len(M)} elements exceeds the pair cap", cap)


def _blocks(M: IntegerSet, desc: str) -> Iterator[tuple[slice, np.ndarray]]:
    """Yield (row slice, D) with D[i, j, :] = e(m_i) - e(n_j)."""
    settings = get_settings()
    _, E = M.exponent_matrix
    n, p = E.shape
    rows = max(1, min(settings.block_rows, _BLOCK_BUDGET // max(1, n * max(p, 1))))
    starts = range(0, n, rows)
    for start in tqdm(starts, desc=desc, disable=not settings.progress, leave=False):
        block = slice(start, min(start + rows, n))
        yield block, E[block, None, :] - E[None, :, :]


def _log_power(x: np.ndarray, ell: float) -> np.ndarray:
    """x^ell as exp(ell log x), with 0^ell = 0 for ell > 0 and x^0 = 1."""
    if ell == 0:
        return np.ones_like(x)
    positive = x > 0
    with np.errstate(divide="ignore"):
        return np.where(positive, np.exp(ell * np.log(np.where(positive, x, 1.0))), 0.0)


class _ExactAccumulator:
    """Counts pairs by the exponent vector of [m,n]/(m,n)."""

    def __init__(self, primes: np.ndarray, E: np.ndarray):
        self.primes = [int(p) for p in primes]
        radix = (E.max(axis=0).astype(object) + 1) if E.size else np.array([], dtype=object)
        self.radix = [int(r) for r in radix]
        self.encodable = math.prod(self.radix) < 2**62
        self.strides = np.cumprod([1] + self.radix[:-1]).astype(np.int64) if self.radix else np.array([], np.int64)
        self.codes: Counter = Counter()
        self.rows: Counter = Counter()

    def add(self, absd: np.ndarray, mask: np.ndarray | None = None) -> None:
        flat = absd.reshape(-1, absd.shape[-1])
        if mask is not None:
            flat = flat[mask.reshape(-1)]
        if flat.shape[0] == 0:
            return
        if self.encodable:
            keys, counts = np.unique(flat.astype(np.int64) @ self.strides, return_counts=True)
            self.codes.update(dict(zip(keys.tolist(), counts.tolist())))
        else:
            keys, counts = np.unique(flat, axis=0, return_counts=True)
            self.rows.update({tuple(k): c for k, c in zip(keys.tolist(), counts.tolist())})

    def _exponents(self):
        for code, count in self.codes.items():
            exps = []
            for r in self.radix:
                code, e = divmod(code, r)
                exps.append(e)
            yield exps, count
        for exps, count in self.rows.items():
            yield exps, count

    def total(self, s: int) -> Fraction:
        terms = {}
        for exps, count in self._exponents():
            q = math.prod(p ** e for p, e in zip(self.primes, exps) if e)
            terms[q] = terms.get(q, 0) + count
        total = Fraction(0)
        for q in sorted(terms):
            total += Fraction(terms[q], q ** s)
        return total


def _pair_sum(M: IntegerSet, sigma: float, ell: float, kind: GcdSumKind) -> tuple[float, Fraction | None]:
    primes, E = M.exponent_matrix
    logp = np.log(primes.astype(np.float64))
    s = _integer_exponent(sigma)
    exact = _ExactAccumulator(primes, E) if s is not None and (ell == 0 or kind == GcdSumKind.diagonal) else None
    row_sums = []
    for _, D in _blocks(M, kind.value):
        absd = np.abs(D)
        weight = np.exp(-sigma * (absd @ logp))
        mask = None
        if kind == GcdSumKind.log_type and ell:
            up = np.clip(D, 0, None) @ logp
            down = np.clip(-D, 0, None) @ logp
            weight = weight * _log_power(up * down, ell)
        elif kind == GcdSumKind.modified_log and ell:
            weight = weight * _log_power(absd @ logp, 2 * ell)
        elif kind == GcdSumKind.diagonal:
            mask = np.all(D >= 0, axis=2) | np.all(D <= 0, axis=2)
            weight = np.where(mask, weight, 0.0)
        row_sums.extend(weight.sum(axis=1).tolist())
        if exact is not None:
            exact.add(absd, mask)
    value = math.fsum(row_sums)
    return value, (exact.total(s) if exact is not None else None)


def _lattice_sum(M: IntegerSet, sigma: float) -> tuple[float, Fraction | None]:
    """S_sigma over a full divisor box via (m,n)^{2 sigma} = sum_{d | (m,n)} J_{2 sigma}(d).

    With H(d) = sum_{d | m} (d/m)^sigma this is sum_d prod_{p | d}(1 - p^{-2 sigma}) H(d)^2,
    and H(d) is the prefix sum of k^{-sigma} over the complementary sub-box.
    """
    primes, E = M.exponent_matrix
    if E.shape[1] == 0:
        return 1.0, Fraction(1) if _integer_exponent(sigma) is not None else None
    tops = E.max(axis=0).astype(int)
    shape = tuple(int(c) + 1 for c in tops)
    ndim = len(shape)

    def axis_vector(j: int, values) -> np.ndarray:
        return np.asarray(values).reshape([-1 if i == j else 1 for i in range(ndim)])

    logk = np.zeros(shape)
    weight = np.ones(shape)
    for j, p in enumerate(primes.tolist()):
        logk = logk + axis_vector(j, np.arange(shape[j]) * math.log(p))
        w = np.full(shape[j], -math.expm1(-2.0 * sigma * math.log(p)))
        w[0] = 1.0
        weight = weight * axis_vector(j, w)
    F = np.exp(-sigma * logk)
    for j in range(ndim):
        F = np.cumsum(F, axis=j)
    H = np.flip(F, axis=tuple(range(ndim)))
    value = math.fsum((weight * H * H).ravel())

    s = _integer_exponent(sigma)
    if s is None:
        return value, None
    K = math.prod(int(p) ** int(c) for p, c in zip(primes.tolist(), tops.tolist()))
    fk = np.ones(shape, dtype=object) * (K ** s)
    wk = np.ones(shape, dtype=object)
    for j, p in enumerate(primes.tolist()):
        p = int(p)
        divisors = np.array([p ** (e * s) for e in range(shape[j])], dtype=object)
        fk = fk // axis_vector(j, divisors)
        col = np.array([p ** (2 * s)] + [p ** (2 * s) - 1] * (shape[j] - 1), dtype=object)
        wk = wk * axis_vector(j, col)
    for j in range(ndim):
        fk = np.cumsum(fk, axis=j)
    Hk = np.flip(fk, axis=tuple(range(ndim)))
    numerator = sum((wk * Hk * Hk).ravel().tolist())
    denominator = math.prod(int(p) ** (2 * s) for p in primes.tolist()) * K ** (2 * s)
    return value, Fraction(numerator, denominator)


def _result(M, sigma, ell, kind, value, exact, strategy="pairs") -> GcdSumResult:
    return GcdSumResult(
        sigma=sigma, ell=ell, kind=kind, value_real=value, value_exact=exact, set_size=len(M), strategy=strategy
    )


def gcd_sum(M: IntegerSet, sigma: float, strategy: str = "auto") -> GcdSumResult:
    """sum over ordered pairs (m, n) of ((m,n)/[m,n])^sigma, diagonal included."""
    if strategy not in ("auto", "pairs", "lattice"):
        raise DomainError(f"unknown strategy {strategy!r}")
    if strategy == "auto":
        strategy = "lattice" if M.is_divisor_box() else "pairs"
    if strategy == "lattice":
        if not M.is_divisor_box():
            raise DomainError("lattice strategy needs the full divisor set of an integer")
        value, exact = _lattice_sum(M, sigma)
    else:
        _check_pair_cap(M)
        value, exact = _pair_sum(M, sigma, 0.0, GcdSumKind.plain)
    logger.debug("S_%g over %d elements (%s) = %.15g", sigma, len(M), strategy, value)
    return _result(M, sigma, 0.0, GcdSumKind.plain, value, exact, strategy)


def log_gcd_sum(M: IntegerSet, sigma: float, ell: float) -> GcdSumResult:
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    _check_pair_cap(M)
    value, exact = _pair_sum(M, sigma, ell, GcdSumKind.log_type)
    return _result(M, sigma, ell, GcdSumKind.log_type, value, exact)


def normalized_log_gcd(M: IntegerSet, sigma: float, ell: float) -> float:
    return log_gcd_sum(M, sigma, ell).value_real / len(M)


def log_gcd_sum_tail(M: IntegerSet, sigma: float, ell: float, cutoff: int) -> float:
    """Part of log_gcd_sum from pairs with m/(m,n) > cutoff or n/(m,n) > cutoff."""
    _check_pair_cap(M)
    primes, _ = M.exponent_matrix
    logp = np.log(primes.astype(np.float64))
    log_cut = math.log(cutoff) + 1e-12
    row_sums = []
    for _, D in _blocks(M, "tail"):
        up = np.clip(D, 0, None) @ logp
        down = np.clip(-D, 0, None) @ logp
        weight = np.exp(-sigma * (up + down)) * _log_power(up * down, ell)
        row_sums.extend(np.where((up > log_cut) | (down > log_cut), weight, 0.0).sum(axis=1).tolist())
    return math.fsum(row_sums)


def modified_log_gcd_sum(M: IntegerSet, ell: float) -> GcdSumResult:
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    _check_pair_cap(M)
    value, exact = _pair_sum(M, 1.0, ell, GcdSumKind.modified_log)
    return _result(M, 1.0, ell, GcdSumKind.modified_log, value, exact)


def diagonal_sum(M: IntegerSet, sigma: float) -> GcdSumResult:
    """The part of S_sigma(M) coming from pairs where one element divides the other."""
    _check_pair_cap(M)
    value, exact = _pair_sum(M, sigma, 0.0, GcdSumKind.diagonal)
    return _result(M, sigma, 0.0, GcdSumKind.diagonal, value, exact)


def gcd_matrix(M: IntegerSet, alpha: float) -> GcdMatrix:
    cap = get_settings().spectral_cap
    if len(M) > cap:
        raise ResourceError(f"GCD matrix of order {len(M)} exceeds the spectral cap", cap)
    primes, _ = M.exponent_matrix
    logp = np.log(primes.astype(np.float64))
    entries = np.empty((len(M), len(M)))
    for block, D in _blocks(M, "matrix"):
        entries[block] = np.exp(-alpha * (np.abs(D) @ logp))
    return GcdMatrix(alpha=alpha, entries=entries)


def quadratic_form(M: IntegerSet, alpha: float, coeffs: np.ndarray | None = None) -> float:
    """c^T G c; uniform unit-norm coefficients by default."""
    G = gcd_matrix(M, alpha).entries
    c = np.full(len(M), 1.0 / math.sqrt(len(M))) if coeffs is None else np.asarray(coeffs, dtype=float)
    return float(c @ G @ c)


def spectral_norm(M: IntegerSet, alpha: float, tol: float = 1e-12) -> SpectralResult:
    """Largest eigenvalue of the GCD matrix by power iteration from the all-ones vector."""
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    G = gcd_matrix(M, alpha).entries
    v = np.full(len(M), 1.0 / math.sqrt(len(M)))
    previous = None
    for iteration in range(1, _MAX_POWER_ITERATIONS + 1):
        w = G @ v
        rayleigh = float(v @ w)
        v = w / np.linalg.norm(w)
        if previous is not None and abs(rayleigh - previous) < tol * abs(rayleigh):
            logger.debug("power iteration converged after %d steps", iteration)
            return SpectralResult(lambda_max=rayleigh, iterations=iteration)
        previous = rayleigh
    raise NumericError(f"power iteration did not converge in {_MAX_POWER_ITERATIONS} steps")

import logging
import math

import numpy as np
import sympy
from scipy import integrate
from scipy.special import logsumexp
from tqdm import tqdm

from app.config import get_settings
from app.errors import DomainError, PrecisionError
from app.numtheory import EULER_GAMMA, primes_up_to
from app.schemas import LogExpectation, RandomZetaConfig, SinglePrimeFactor

logger = logging.getLogger(__name__)

_CHUNK = 2048


def sample_angles(seed: int, index: int, count: int) -> np.ndarray:
    # sample index in the top counter word, so no result depends on chunking
    bit_generator = np.random.Philox(key=seed, counter=[0, 0, 0, index])
    return 2.0 * np.pi * np.random.Generator(bit_generator).random(count)


def log_zeta_from_angles(angles: np.ndarray, primes: np.ndarray, alpha: float) -> np.ndarray:
    """-sum_p log|1 - e^{i theta_p} p^-alpha| along the last axis."""
    x = np.asarray(primes, dtype=np.float64) ** -alpha
    return -0.5 * np.sum(np.log1p(x * x - 2.0 * x * np.cos(angles)), axis=-1)


def _angle_chunks(cfg: RandomZetaConfig, count: int, desc: str):
    settings = get_settings()
    for start in tqdm(range(0, cfg.samples, _CHUNK), desc=desc, disable=not settings.progress, leave=False):
        stop = min(start + _CHUNK, cfg.samples)
        yield np.stack([sample_angles(cfg.seed, i, count) for i in range(start, stop)])


def sample_log_zeta(cfg: RandomZetaConfig) -> np.ndarray:
    primes = primes_up_to(cfg.prime_cutoff) if cfg.prime_cutoff >= 2 else np.array([], dtype=np.int64)
    if primes.size == 0:
        return np.zeros(cfg.samples)
    return np.concatenate([
        log_zeta_from_angles(angles, primes, cfg.alpha)
        for angles in _angle_chunks(cfg, primes.size, "log zeta")
    ])


def random_multiplicative(cfg: RandomZetaConfig, n_max: int) -> np.ndarray:
    """X(n) for n = 1..n_max, one row per sample (completely multiplicative in n)."""
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    primes = primes_up_to(n_max)
    column = {int(p): j for j, p in enumerate(primes)}
    E = np.zeros((n_max, primes.size))
    for n in range(2, n_max + 1):
        for p, e in sympy.factorint(n).items():
            E[n - 1, column[p]] = e
    rows = [np.exp(1j * (angles @ E.T)) for angles in _angle_chunks(cfg, primes.size, "X(n)")]
    return np.concatenate(rows) if rows else np.ones((cfg.samples, n_max), dtype=complex)


def lz_bound(Y: float) -> float:
    if Y <= math.e:
        raise DomainError(f"log log Y needs Y > e, got {Y}")
    return 2.0 * Y * (math.log(math.log(Y)) + EULER_GAMMA)


def logexpect_bound(Y: float, alpha: float) -> float:
    A = (1.0 - alpha) * math.log(Y)
    return lz_bound(Y) + 2.0 * Y * math.expm1(A)


def mc_log_expectation(cfg: RandomZetaConfig) -> LogExpectation:
    """log E|zeta(alpha, X)|^{2Y} by log-sum-exp over the samples."""
    logs = 2.0 * cfg.Y * sample_log_zeta(cfg)
    n = logs.size
    estimate = float(logsumexp(logs) - math.log(n))
    if n > 1:
        # delta method on the shifted weights
        w = np.exp(logs - logs.max())
        std_error = float(np.std(w, ddof=1) / math.sqrt(n) / np.mean(w))
    else:
        std_error = math.inf
    bounds = {}
    if cfg.Y > math.e:
        bounds = {"lz_bound": lz_bound(cfg.Y), "logexpect_bound": logexpect_bound(cfg.Y, cfg.alpha)}
    logger.info("log E|zeta|^{2Y} = %.6f +- %.2g over %d samples", estimate, std_error, n)
    return LogExpectation(estimate=estimate, std_error=std_error, samples=n, **bounds)


def bessel_i0(t: float) -> float:
    q = 0.25 * t * t
    term, total, n = 1.0, 1.0, 0
    while term > 1e-17 * total:
        n += 1
        term *= q / (n * n)
        total += term
    return total


def single_prime_factor(p: int, alpha: float, Y: float) -> SinglePrimeFactor:
    """E|1 - X(p) p^-alpha|^{-2Y} by quadrature, against I_0(2Y / p^alpha)."""
    if p < 2:
        raise DomainError(f"p must be a prime, got {p}")
    if Y < 0:
        raise DomainError(f"Y must be >= 0, got {Y}")
    x = float(p) ** -alpha
    tol = get_settings().quad_tol
    # symmetric in theta, so average over [0, pi]
    value, err = integrate.quad(
        lambda theta: math.exp(-Y * math.log1p(x * x - 2.0 * x * math.cos(theta))),
        0.0, math.pi, epsabs=0.0, epsrel=tol, limit=200,
    )
    exact = value / math.pi
    if err > 100 * tol * abs(value):
        raise PrecisionError(f"quadrature error {err:.2g} for p={p}, alpha={alpha}, Y={Y}")
    return SinglePrimeFactor(exact=exact, bessel_approx=bessel_i0(2.0 * Y * x))


def alpha_shift_bound(p: int, alpha: float, Y: float) -> float:
    """((1 - 1/p)/(1 - p^-alpha))^{2Y}, an upper bound for E_Y(p, alpha)/E_Y(p, 1)."""
    if p < 2 or Y < 0:
        raise DomainError("need p >= 2 and Y >= 0")
    return math.exp(2.0 * Y * (math.log1p(-1.0 / p) - math.log1p(-float(p) ** -alpha)))


def exact_log_expectation(cfg: RandomZetaConfig) -> float:
    primes = primes_up_to(cfg.prime_cutoff) if cfg.prime_cutoff >= 2 else []
    return math.fsum(math.log(single_prime_factor(int(p), cfg.alpha, cfg.Y).exact) for p in primes)

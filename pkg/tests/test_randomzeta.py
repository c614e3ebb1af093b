import math

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError
from scipy import special

from app.errors import DomainError
from app.randomzeta import (
    alpha_shift_bound,
    bessel_i0,
    exact_log_expectation,
    log_zeta_from_angles,
    lz_bound,
    mc_log_expectation,
    random_multiplicative,
    sample_angles,
    sample_log_zeta,
    single_prime_factor,
)
from app.schemas import RandomZetaConfig


def test_config_validation():
    with pytest.raises(PydanticValidationError):
        RandomZetaConfig(alpha=0.5)
    with pytest.raises(PydanticValidationError):
        RandomZetaConfig(alpha=1.0, seed=2**64)
    with pytest.raises(PydanticValidationError):
        RandomZetaConfig(alpha=1.0, samples=0)


def test_no_primes_gives_zero():
    assert np.all(sample_log_zeta(RandomZetaConfig(alpha=1.0, prime_cutoff=1.5, samples=5)) == 0)


def test_log_zeta_from_angles():
    value = log_zeta_from_angles(np.array([np.pi]), np.array([2]), 1.0)
    assert value == pytest.approx(-math.log(1.5))


def test_samples_are_reproducible():
    cfg = RandomZetaConfig(alpha=0.8, prime_cutoff=100, samples=3000, seed=99)
    first = sample_log_zeta(cfg)
    assert np.array_equal(first, sample_log_zeta(cfg))
    fewer = sample_log_zeta(cfg.model_copy(update={"samples": 5}))
    assert np.allclose(first[:5], fewer, rtol=1e-14, atol=0)
    assert np.array_equal(sample_angles(99, 7, 3), sample_angles(99, 7, 3))
    assert not np.array_equal(sample_angles(99, 7, 3), sample_angles(99, 8, 3))


@pytest.mark.parametrize("P, expected", [(2, math.log(4 / 3)), (3, math.log(1.5))])
def test_mc_single_primes(P, expected):
    result = mc_log_expectation(RandomZetaConfig(alpha=1.0, prime_cutoff=P, Y=1.0, samples=20000, seed=12345))
    assert abs(result.estimate - expected) <= 3 * result.std_error
    assert result.lz_bound is None and result.logexpect_bound is None


def test_mc_matches_factorisation():
    cfg = RandomZetaConfig(alpha=1.0, prime_cutoff=5, Y=1.0, samples=20000, seed=2024)
    exact = exact_log_expectation(cfg)
    assert exact == pytest.approx(math.log(4 / 3 * 9 / 8 * 25 / 24), rel=1e-9)
    result = mc_log_expectation(cfg)
    assert abs(result.estimate - exact) <= 3 * result.std_error


@pytest.mark.slow
@pytest.mark.parametrize("Y", [50.0, 100.0])
def test_mc_below_log_expectation_bound(Y):
    result = mc_log_expectation(RandomZetaConfig(alpha=1.0, prime_cutoff=1e4, Y=Y, samples=10**5, seed=7))
    assert result.lz_bound == pytest.approx(lz_bound(Y))
    assert result.estimate <= result.lz_bound + 10 * Y / math.log(Y)


def test_lz_bound_domain():
    with pytest.raises(DomainError):
        lz_bound(2.0)


def test_bessel_i0():
    assert bessel_i0(0.0) == 1.0
    for t in (0.5, 1.0, 5.0, 20.0):
        assert bessel_i0(t) == pytest.approx(float(special.i0(t)), rel=1e-13)


def test_single_prime_factor():
    assert single_prime_factor(2, 1.0, 1.0).exact == pytest.approx(4 / 3, abs=1e-10)
    flat = single_prime_factor(5, 1.0, 0.0)
    assert flat.exact == pytest.approx(1.0) and flat.bessel_approx == 1.0
    far = single_prime_factor(101, 1.0, 10.0)
    assert far.exact / far.bessel_approx == pytest.approx(1.0, abs=0.01)


def test_single_prime_factor_monotone_in_alpha():
    values = [single_prime_factor(3, alpha, 2.0).exact for alpha in (0.6, 0.7, 0.8, 0.9, 1.0)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_alpha_shift_bound():
    ratio = single_prime_factor(3, 0.8, 2.0).exact / single_prime_factor(3, 1.0, 2.0).exact
    assert ratio <= alpha_shift_bound(3, 0.8, 2.0)


def test_random_multiplicative_orthogonality():
    X = random_multiplicative(RandomZetaConfig(alpha=1.0, samples=20000, seed=3), 30)
    assert X.shape == (20000, 30)
    assert np.allclose(X[:, 0], 1.0)
    assert np.allclose(X[:, 5], X[:, 1] * X[:, 2])
    gram = (X.conj().T @ X) / X.shape[0]
    assert np.allclose(np.diag(gram), 1.0)
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() < 0.05


@pytest.mark.slow
def test_random_multiplicative_orthogonality_tight():
    X = random_multiplicative(RandomZetaConfig(alpha=1.0, samples=10**5, seed=5), 30)
    gram = (X.conj().T @ X) / X.shape[0]
    assert np.abs(gram - np.diag(np.diag(gram))).max() < 0.02

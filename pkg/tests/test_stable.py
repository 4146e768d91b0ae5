import math

import numpy as np
import pytest

from levybound import (
    RngStream,
    StableParams,
    empirical_char_fn,
    sample_isotropic_stable,
    sample_skewed_stable,
    sample_subordinator,
)
from levybound.errors import DimensionMismatchError, InvalidParameterError

# Monte-Carlo tolerance: 5 / sqrt(N) on both ECF parts.
N_MC = 200_000
TOL = 5.0 / math.sqrt(N_MC)


def test_totally_skewed_positive_support():
    rng = RngStream(42)
    draws = sample_skewed_stable(StableParams(0.9, 1.0, 1.0, 0.0), rng, size=100_000)
    assert (draws > 0.0).all()


def test_symmetric_median_near_zero():
    rng = RngStream(7)
    draws = sample_skewed_stable(StableParams(1.5, 0.0, 1.0, 0.0), rng, size=1_000_000)
    assert abs(np.median(draws)) < 0.01


def test_symmetric_scalar_char_fn():
    rng = RngStream(8)
    draws = sample_skewed_stable(StableParams(1.5, 0.0, 1.0, 0.0), rng, size=1_000_000)
    assert abs(np.cos(draws).mean() - math.exp(-1.0)) < 0.005


@pytest.mark.parametrize(
    "alpha,beta,scale",
    [(0.0, 0.0, 1.0), (2.5, 0.0, 1.0), (1.0, 0.0, 1.0), (1.5, 1.5, 1.0), (1.5, 0.0, 0.0)],
)
def test_invalid_stable_params(alpha, beta, scale):
    with pytest.raises(InvalidParameterError):
        StableParams(alpha, beta, scale, 0.0)


@pytest.mark.parametrize("alpha", [1.1, 1.2, 1.5, 1.8, 1.9])
def test_subordinator_positivity(alpha):
    rng = RngStream(3, int(alpha * 10))
    draws = sample_subordinator(alpha, rng, size=100_000)
    assert (draws > 0.0).all()


@pytest.mark.parametrize("alpha", [1.0, 2.0, 0.5, 2.2])
def test_subordinator_domain(alpha):
    with pytest.raises(InvalidParameterError):
        sample_subordinator(alpha, RngStream(0))


def test_isotropic_domain():
    with pytest.raises(InvalidParameterError):
        sample_isotropic_stable(1.0, 3, RngStream(0))
    with pytest.raises(InvalidParameterError):
        sample_isotropic_stable(2.1, 3, RngStream(0))
    with pytest.raises(InvalidParameterError):
        sample_isotropic_stable(1.5, 0, RngStream(0))


def test_gaussian_endpoint_variance():
    rng = RngStream(5)
    draws = sample_isotropic_stable(2.0, 3, rng, size=1_000_000)
    assert np.allclose(draws.var(axis=0), 2.0, atol=0.02)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8, 2.0])
@pytest.mark.parametrize("dim", [1, 3, 10])
def test_isotropic_char_fn_grid(alpha, dim):
    rng = RngStream(11, int(alpha * 100) * 100 + dim)
    draws = sample_isotropic_stable(alpha, dim, rng, size=N_MC)
    freq_rng = RngStream(99, dim)
    for norm in (0.25, 0.6, 1.0, 1.5, 2.0):
        xi = freq_rng.gen.standard_normal(dim)
        xi *= norm / np.linalg.norm(xi)
        cos_part, sin_part = empirical_char_fn(draws, xi)
        assert abs(cos_part - math.exp(-(norm**alpha))) < TOL
        assert abs(sin_part) < TOL


def test_zero_frequency_char_fn_is_one():
    rng = RngStream(17)
    draws = sample_isotropic_stable(1.7, 5, rng, size=1000)
    cos_part, sin_part = empirical_char_fn(draws, np.zeros(5))
    assert cos_part == 1.0 and sin_part == 0.0


def test_self_similarity_scaling():
    # scaling by t^(1/alpha) turns unit-time draws into time-t increments
    alpha, t = 1.5, 0.7
    rng = RngStream(23)
    draws = t ** (1.0 / alpha) * sample_isotropic_stable(alpha, 2, rng, size=N_MC)
    xi = np.array([1.0, 0.0])
    cos_part, sin_part = empirical_char_fn(draws, xi)
    assert abs(cos_part - math.exp(-t)) < TOL
    assert abs(sin_part) < TOL


def test_isotropy_under_frequency_permutation():
    alpha = 1.6
    rng = RngStream(31)
    draws = sample_isotropic_stable(alpha, 3, rng, size=N_MC)
    xi = np.array([1.2, -0.3, 0.4])
    target = math.exp(-np.linalg.norm(xi) ** alpha)
    c1, _ = empirical_char_fn(draws, xi)
    c2, _ = empirical_char_fn(draws, xi[[2, 0, 1]])
    assert abs(c1 - target) < TOL
    assert abs(c2 - target) < TOL


def test_char_fn_exact_cases():
    zeros = np.zeros((10, 4))
    assert empirical_char_fn(zeros, np.ones(4)) == (1.0, 0.0)
    sym = np.concatenate([np.ones((5, 2)), -np.ones((5, 2))])
    _, sin_part = empirical_char_fn(sym, np.array([0.3, 0.9]))
    assert sin_part == 0.0


def test_char_fn_errors():
    with pytest.raises(DimensionMismatchError):
        empirical_char_fn(np.ones((3, 2)), np.ones(3))
    with pytest.raises(InvalidParameterError):
        empirical_char_fn(np.empty((0, 2)), np.ones(2))


def test_streams_are_deterministic():
    a = sample_skewed_stable(StableParams(1.5, 0.3), RngStream(123, 4), size=1000)
    b = sample_skewed_stable(StableParams(1.5, 0.3), RngStream(123, 4), size=1000)
    assert (a == b).all()
    c = sample_skewed_stable(StableParams(1.5, 0.3), RngStream(123, 5), size=1000)
    assert (a != c).any()


def test_scalar_draws_are_floats():
    x = sample_skewed_stable(StableParams(1.5, 0.0), RngStream(0))
    assert isinstance(x, float)
    v = sample_isotropic_stable(1.5, 4, RngStream(0))
    assert v.shape == (4,)

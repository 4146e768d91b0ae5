"""Exact sampling of one-dimensional skewed stable laws and isotropic
symmetric alpha-stable vectors.

The scalar sampler is the Chambers-Mallows-Stuck transform in the
1-parameterization (location added after scaling), restricted to
alpha != 1. Isotropic d-dimensional vectors are built by Gaussian
subordination: X = sqrt(A) * G with A a totally skewed positive
(alpha/2)-stable variable and G standard normal. The empirical
characteristic function estimator is the validation oracle for both:
for a unit-time isotropic alpha-stable increment,
E[cos(xi . X)] = exp(-||xi||^alpha) and E[sin(xi . X)] = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .rng import RngStream


@dataclass(frozen=True)
class StableParams:
    """Parameters of the one-dimensional stable law S(alpha, beta, scale, location)."""

    alpha: float
    beta: float = 0.0
    scale: float = 1.0
    location: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise InvalidParameterError(f"alpha must be in (0, 2], got {self.alpha}")
        if self.alpha == 1.0:
            raise InvalidParameterError("alpha = 1 branch is not supported")
        if not -1.0 <= self.beta <= 1.0:
            raise InvalidParameterError(f"beta must be in [-1, 1], got {self.beta}")
        if not self.scale > 0.0:
            raise InvalidParameterError(f"scale must be > 0, got {self.scale}")


def sample_skewed_stable(params: StableParams, rng: RngStream, size: int | None = None):
    """Draw from S(alpha, beta, scale, location) via the CMS transform.

    Returns a float when ``size`` is None, else an array of ``size`` draws.
    """
    alpha, beta = params.alpha, params.beta
    u = rng.unit_open(size)
    w = -np.log(rng.unit_open(size))
    theta = np.pi * (u - 0.5)  # uniform on the open interval (-pi/2, pi/2)

    tan_half = np.tan(np.pi * alpha / 2.0)
    b = np.arctan(beta * tan_half) / alpha
    sfac = (1.0 + beta * beta * tan_half * tan_half) ** (1.0 / (2.0 * alpha))

    x = (
        sfac
        * np.sin(alpha * (theta + b))
        / np.cos(theta) ** (1.0 / alpha)
        * (np.cos(theta - alpha * (theta + b)) / w) ** ((1.0 - alpha) / alpha)
    )
    out = params.location + params.scale * x
    return float(out) if size is None else out


def subordinator_scale(alpha: float) -> float:
    """Scale 2 cos(pi alpha / 4)^(2/alpha) of the positive (alpha/2)-stable mixer."""
    return 2.0 * np.cos(np.pi * alpha / 4.0) ** (2.0 / alpha)


def sample_subordinator(alpha: float, rng: RngStream, size: int | None = None):
    """Draw A ~ S(alpha/2, 1, 2 cos(pi alpha/4)^(2/alpha), 0); strictly positive."""
    if not 1.0 < alpha < 2.0:
        raise InvalidParameterError(f"subordinator needs alpha in (1, 2), got {alpha}")
    params = StableParams(alpha / 2.0, 1.0, subordinator_scale(alpha), 0.0)
    a = sample_skewed_stable(params, rng, size)
    if size is None:
        if not a > 0.0:
            raise RuntimeError(f"non-positive subordinator draw {a}: sampler bug")
        return a
    if not (a > 0.0).all():
        raise RuntimeError("non-positive subordinator draw: sampler bug")
    return a


def sample_isotropic_stable(alpha: float, dim: int, rng: RngStream, size: int | None = None):
    """Draw isotropic symmetric alpha-stable vectors in R^dim.

    For alpha < 2 uses sqrt(A) * G subordination; alpha = 2 is handled
    analytically as sqrt(2) * G because the subordinator scale
    degenerates to 0 there. Output shape is (dim,) or (size, dim).
    """
    if not 1.0 < alpha <= 2.0:
        raise InvalidParameterError(f"alpha must be in (1, 2], got {alpha}")
    if dim < 1:
        raise InvalidParameterError(f"dim must be >= 1, got {dim}")
    shape = (dim,) if size is None else (size, dim)
    if alpha == 2.0:
        return np.sqrt(2.0) * rng.gen.standard_normal(shape)
    a = sample_subordinator(alpha, rng, size)
    g = rng.gen.standard_normal(shape)
    if size is None:
        return np.sqrt(a) * g
    return np.sqrt(a)[:, None] * g


def empirical_char_fn(samples, xi) -> tuple[float, float]:
    """Empirical characteristic function at frequency ``xi``.

    Returns (mean cos(xi . x), mean sin(xi . x)) over the sample rows.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    f = np.asarray(xi, dtype=float).reshape(-1)
    if x.shape[0] == 0:
        raise InvalidParameterError("empty sample list")
    if x.shape[1] != f.shape[0]:
        raise DimensionMismatchError(
            f"samples have dim {x.shape[1]} but xi has dim {f.shape[0]}"
        )
    t = x @ f
    return float(np.cos(t).mean()), float(np.sin(t).mean())

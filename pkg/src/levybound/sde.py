"""Euler-Maruyama discretization of the heavy-tailed training dynamics.

One step moves the flat parameter vector by

    w <- w - gamma * grad - eta * gamma * w
           + gamma^(1/alpha) * sigma1 * L   (isotropic alpha-stable draw)
           + sqrt(2 gamma)   * sigma2 * G   (standard Gaussian draw)

Full-batch gradients reproduce the continuous model; an integer batch
size draws a fresh without-replacement subset each step, so batch = n
matches full batch up to summation order. Each run consumes a single
RngStream in the fixed order (indices, stable, gaussian) per step; terms
whose scale is zero are skipped entirely, which keeps noise-free runs
bit-identical to plain gradient descent with weight decay.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .models import (
    Dataset,
    ModelSpec,
    init_params,
    param_count,
    surrogate_loss_and_grad,
    zero_one_error,
)
from .rng import RngStream
from .stable import sample_isotropic_stable

DIVERGENCE_NORM = 1e12


@dataclass(frozen=True)
class TrainConfig:
    """All knobs of one discretized run; batch_size None means full batch."""

    gamma: float
    eta: float
    alpha: float
    sigma1: float
    sigma2: float = 0.0
    steps: int = 1000
    batch_size: int | None = None
    eval_interval: int = 10
    seed: int = 0

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise InvalidParameterError(f"gamma must be > 0, got {self.gamma}")
        if self.eta < 0.0:
            raise InvalidParameterError(f"eta must be >= 0, got {self.eta}")
        if not self.gamma * self.eta < 1.0:
            raise InvalidParameterError("gamma * eta must be < 1")
        if not 1.0 < self.alpha <= 2.0:
            raise InvalidParameterError(f"alpha must be in (1, 2], got {self.alpha}")
        if self.sigma1 < 0.0 or self.sigma2 < 0.0:
            raise InvalidParameterError("noise scales must be >= 0")
        if self.steps < 1:
            raise InvalidParameterError("steps must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise InvalidParameterError("batch_size must be >= 1 or None")
        if self.eval_interval < 1:
            raise InvalidParameterError("eval_interval must be >= 1")


@dataclass(frozen=True)
class StepRecord:
    step: int
    grad_sq: float
    train_error: float | None = None
    test_error: float | None = None


@dataclass(frozen=True)
class RunTrace:
    config: TrainConfig
    records: tuple[StepRecord, ...]
    final_params_hash: int
    diverged: bool = False


def params_hash(params: np.ndarray) -> int:
    """64-bit digest of the raw parameter bytes."""
    return int.from_bytes(
        hashlib.blake2b(np.ascontiguousarray(params).tobytes(), digest_size=8).digest(),
        "big",
    )


def em_step(
    params: np.ndarray,
    grad: np.ndarray,
    cfg: TrainConfig,
    stable_draw: np.ndarray | None = None,
    gaussian_draw: np.ndarray | None = None,
) -> np.ndarray:
    """One Euler-Maruyama update; pure function of its inputs."""
    if grad.shape != params.shape:
        raise DimensionMismatchError("grad shape does not match params")
    new = params - cfg.gamma * grad - cfg.eta * cfg.gamma * params
    if cfg.sigma1 > 0.0:
        if stable_draw is None or stable_draw.shape != params.shape:
            raise DimensionMismatchError("stable draw missing or mis-shaped")
        new = new + cfg.gamma ** (1.0 / cfg.alpha) * cfg.sigma1 * stable_draw
    if cfg.sigma2 > 0.0:
        if gaussian_draw is None or gaussian_draw.shape != params.shape:
            raise DimensionMismatchError("gaussian draw missing or mis-shaped")
        new = new + np.sqrt(2.0 * cfg.gamma) * cfg.sigma2 * gaussian_draw
    return new


def run_training(
    spec: ModelSpec,
    train: Dataset,
    test: Dataset,
    cfg: TrainConfig,
    init_scale: float = 1.0,
    rng: RngStream | None = None,
) -> RunTrace:
    """Run the discretized dynamics and record per-step instrumentation.

    Records the squared norm of the gradient actually used (batch or
    full) at every step, and train/test 0-1 errors at the eval cadence.
    A non-finite parameter or a norm above 1e12 stops the run early with
    the diverged flag set; that is a recorded outcome, not an error.
    """
    if train.input_dim != test.input_dim or train.num_classes != test.num_classes:
        raise DimensionMismatchError("train and test datasets do not match")
    if cfg.batch_size is not None and cfg.batch_size > train.n:
        raise InvalidParameterError(
            f"batch_size {cfg.batch_size} exceeds training rows {train.n}"
        )
    if rng is None:
        rng = RngStream(cfg.seed)

    d = param_count(spec)
    params = init_params(spec, init_scale, rng)
    n = train.n
    full_batch = cfg.batch_size is None
    records: list[StepRecord] = []
    diverged = False

    for k in range(1, cfg.steps + 1):
        if full_batch:
            idx = np.arange(n)
        else:
            idx = rng.gen.choice(n, size=cfg.batch_size, replace=False)
        _, grad = surrogate_loss_and_grad(spec, params, train, idx)
        grad_sq = float(grad @ grad)

        train_err = test_err = None
        if k % cfg.eval_interval == 0 or k == cfg.steps:
            train_err = zero_one_error(spec, params, train)
            test_err = zero_one_error(spec, params, test)
        records.append(StepRecord(k, grad_sq, train_err, test_err))

        stable_draw = (
            sample_isotropic_stable(cfg.alpha, d, rng) if cfg.sigma1 > 0.0 else None
        )
        gaussian_draw = rng.gen.standard_normal(d) if cfg.sigma2 > 0.0 else None
        params = em_step(params, grad, cfg, stable_draw, gaussian_draw)

        if not np.isfinite(params).all() or np.linalg.norm(params) > DIVERGENCE_NORM:
            diverged = True
            break

    return RunTrace(cfg, tuple(records), params_hash(params), diverged)

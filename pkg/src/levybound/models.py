"""Small bias-free differentiable classifiers.

Two kinds: a linear softmax predictor (two widths) and fully-connected
ReLU networks (three or more widths). Parameters live in one flat
float64 vector, laid out layer-major and row-major within each weight
matrix, so the optimizer can treat the model as a point in R^d.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .rng import RngStream


@dataclass(frozen=True)
class ModelSpec:
    """Layer widths: (input dim, hidden widths..., class count)."""

    widths: tuple[int, ...]

    def __post_init__(self):
        if len(self.widths) < 2:
            raise InvalidParameterError("need at least input and output widths")
        if any(w < 1 for w in self.widths):
            raise InvalidParameterError(f"widths must be positive, got {self.widths}")

    @property
    def kind(self) -> str:
        return "linear" if len(self.widths) == 2 else "fcn"

    @property
    def num_classes(self) -> int:
        return self.widths[-1]

    @property
    def input_dim(self) -> int:
        return self.widths[0]


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n, input dim) with integer labels in [0, num_classes)."""

    features: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        if self.features.ndim != 2:
            raise InvalidParameterError("features must be a 2-D matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise DimensionMismatchError(
                f"{self.features.shape[0]} feature rows but {self.labels.shape[0]} labels"
            )
        if self.labels.size and (
            self.labels.min() < 0 or self.labels.max() >= self.num_classes
        ):
            raise InvalidParameterError("labels out of range for num_classes")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def input_dim(self) -> int:
        return self.features.shape[1]


def param_count(spec: ModelSpec) -> int:
    return sum(a * b for a, b in zip(spec.widths[:-1], spec.widths[1:]))


def init_params(spec: ModelSpec, scale: float, rng: RngStream) -> np.ndarray:
    """Gaussian init with per-layer std scale / sqrt(fan-in); scale 0 gives zeros."""
    if scale < 0.0:
        raise InvalidParameterError(f"scale must be >= 0, got {scale}")
    d = param_count(spec)
    if scale == 0.0:
        return np.zeros(d)
    blocks = []
    for fan_in, fan_out in zip(spec.widths[:-1], spec.widths[1:]):
        std = scale / np.sqrt(fan_in)
        blocks.append(std * rng.gen.standard_normal(fan_in * fan_out))
    return np.concatenate(blocks)


def _unpack(spec: ModelSpec, params: np.ndarray) -> list[np.ndarray]:
    if params.shape != (param_count(spec),):
        raise DimensionMismatchError(
            f"params has shape {params.shape}, spec needs ({param_count(spec)},)"
        )
    mats = []
    offset = 0
    for fan_in, fan_out in zip(spec.widths[:-1], spec.widths[1:]):
        mats.append(params[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out))
        offset += fan_in * fan_out
    return mats


def _forward(spec: ModelSpec, params: np.ndarray, x: np.ndarray):
    """Forward pass; returns (logits, activations per layer input)."""
    mats = _unpack(spec, params)
    acts = [x]
    a = x
    for w in mats[:-1]:
        a = np.maximum(a @ w, 0.0)
        acts.append(a)
    return acts[-1] @ mats[-1], acts, mats


def logits_of(spec: ModelSpec, params: np.ndarray, features: np.ndarray) -> np.ndarray:
    return _forward(spec, params, features)[0]


def surrogate_loss_and_grad(
    spec: ModelSpec, params: np.ndarray, data: Dataset, indices
) -> tuple[float, np.ndarray]:
    """Mean cross-entropy over the given rows and its exact gradient.

    Softmax is computed on max-shifted logits; the ReLU subgradient at 0
    is 0. The mean makes the result invariant to the order of ``indices``
    up to float summation error.
    """
    idx = np.asarray(indices, dtype=np.intp).reshape(-1)
    if idx.size == 0:
        raise InvalidParameterError("indices must be nonempty")
    if idx.min() < 0 or idx.max() >= data.n:
        raise IndexError(f"batch index out of range [0, {data.n})")
    if not np.isfinite(params).all():
        raise InvalidParameterError("non-finite parameters")
    if data.input_dim != spec.input_dim or data.num_classes != spec.num_classes:
        raise DimensionMismatchError("dataset shape does not match model spec")

    x = data.features[idx]
    y = data.labels[idx]
    logits, acts, mats = _forward(spec, params, x)

    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_p = shifted - log_z
    loss = -float(np.mean(log_p[np.arange(idx.size), y]))

    delta = np.exp(log_p)
    delta[np.arange(idx.size), y] -= 1.0
    delta /= idx.size

    grads = [None] * len(mats)
    for layer in range(len(mats) - 1, -1, -1):
        grads[layer] = acts[layer].T @ delta
        if layer > 0:
            delta = (delta @ mats[layer].T) * (acts[layer] > 0.0)
    return loss, np.concatenate([g.reshape(-1) for g in grads])


def zero_one_error(spec: ModelSpec, params: np.ndarray, data: Dataset) -> float:
    """Fraction of misclassified rows; argmax ties go to the lowest class index."""
    preds = np.argmax(logits_of(spec, params, data.features), axis=1)
    return float(np.mean(preds != data.labels))

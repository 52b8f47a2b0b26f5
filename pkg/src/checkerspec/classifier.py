"""Logistic-regression detector over standardized feature vectors.

The same model serves both detectors: ``source="spectrum"`` for flattened
enhanced spectra and ``source="pixel"`` for the downsampled-luma baseline.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .enhance import EnhancedSpectrum
from .errors import FormatError, LengthError, ShapeError, TrainingError
from .pnm import Image, resize_bilinear, to_gray
from .rng import SplitMix64

SOURCES = ("spectrum", "pixel")
PIXEL_SIDE = 64
MODEL_MAGIC = b"CLF1"
STD_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    source: str = "spectrum"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64).ravel())

    @property
    def dim(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 40
    batch_size: int = 32
    l2: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    mean: np.ndarray
    std: np.ndarray
    weights: np.ndarray
    bias: float
    source: str = "spectrum"

    @property
    def dim(self) -> int:
        return self.weights.size

    def __eq__(self, other):
        if not isinstance(other, ClassifierModel):
            return NotImplemented
        return save_model(self) == save_model(other)


def flatten_spectrum(e: EnhancedSpectrum) -> FeatureVector:
    return FeatureVector(e.values.ravel().copy(), "spectrum")


def pixel_features(img: Image, side: int = PIXEL_SIDE) -> FeatureVector:
    """Baseline input: luma bilinearly resampled to ``side x side``, flattened."""
    return FeatureVector(resize_bilinear(to_gray(img), side, side).values.ravel(), "pixel")


def _stack(features: Sequence[FeatureVector]) -> np.ndarray:
    dims = {f.dim for f in features}
    if len(dims) != 1:
        raise ShapeError(f"feature vectors have mixed dimensions {sorted(dims)}")
    return np.stack([f.values for f in features])


def fit_standardizer(features: Sequence[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean and population std; near-constant dimensions get std 1."""
    if len(features) < 2:
        raise ShapeError("need at least two feature vectors")
    x = _stack(features)
    mean = x.mean(axis=0)
    std = np.sqrt(((x - mean) ** 2).mean(axis=0))
    std[std < STD_FLOOR] = 1.0
    return mean, std


def sigmoid(z):
    # split by sign so exp never overflows
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(w: np.ndarray, b: float, x: np.ndarray, y: np.ndarray, l2: float):
    """Mean binary cross-entropy plus ``l2 * |w|^2 / 2`` (bias unpenalized).

    ``x`` is already standardized. Returns ``(loss, grad_w, grad_b)``.
    """
    z = x @ w + b
    # log(1 + e^z) - y z, written stably
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * float(w @ w)
    err = sigmoid(z) - y
    grad_w = x.T @ err / len(y) + l2 * w
    grad_b = float(err.mean())
    return float(loss), grad_w, grad_b


def train_with_history(features: Sequence[FeatureVector], labels: Sequence[int],
                       cfg: TrainConfig = TrainConfig()) -> tuple[ClassifierModel, list[float]]:
    """Fit the model and return it with the full-training-set loss after each epoch.

    ``history[0]`` is the loss of the zero-initialized model.
    """
    if len(features) != len(labels):
        raise ShapeError(f"{len(features)} features but {len(labels)} labels")
    y = np.asarray(labels, dtype=np.float64)
    if not np.all((y == 0) | (y == 1)):
        raise TrainingError("labels must be 0 or 1")
    if y.min() == y.max():
        raise TrainingError("training data contains a single class")
    sources = {f.source for f in features}
    if len(sources) != 1:
        raise ShapeError(f"mixed feature sources {sorted(sources)}")
    source = sources.pop()

    mean, std = fit_standardizer(features)
    x = (_stack(features) - mean) / std
    w = np.zeros(x.shape[1])
    b = 0.0
    history = [loss_and_grad(w, b, x, y, cfg.l2)[0]]
    for epoch in range(cfg.epochs):
        order = np.array(SplitMix64(cfg.seed + epoch).permutation(len(y)))
        for start in range(0, len(y), cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            _, gw, gb = loss_and_grad(w, b, x[batch], y[batch], cfg.l2)
            w = w - cfg.learning_rate * gw
            b = b - cfg.learning_rate * gb
        history.append(loss_and_grad(w, b, x, y, cfg.l2)[0])
    return ClassifierModel(mean, std, w, float(b), source), history


def train(features: Sequence[FeatureVector], labels: Sequence[int],
          cfg: TrainConfig = TrainConfig()) -> ClassifierModel:
    return train_with_history(features, labels, cfg)[0]


def logit(model: ClassifierModel, f: FeatureVector) -> float:
    if f.dim != model.dim:
        raise ShapeError(f"feature dim {f.dim} != model dim {model.dim}")
    if f.source != model.source:
        raise ShapeError(f"feature source {f.source!r} != model source {model.source!r}")
    return float(model.weights @ ((f.values - model.mean) / model.std) + model.bias)


def score(model: ClassifierModel, f: FeatureVector) -> float:
    """Probability in [0, 1] that ``f`` comes from a CNN-generated image."""
    return float(sigmoid(np.array([logit(model, f)]))[0])


def save_model(model: ClassifierModel) -> bytes:
    d = model.dim
    head = MODEL_MAGIC + struct.pack("<BI", SOURCES.index(model.source), d)
    body = b"".join(np.asarray(a, dtype="<f8").tobytes() for a in (model.mean, model.std, model.weights))
    return head + body + struct.pack("<d", model.bias)


def load_model(data: bytes) -> ClassifierModel:
    if bytes(data[:4]) != MODEL_MAGIC:
        raise FormatError("not a CLF1 model")
    if len(data) < 9:
        raise LengthError("truncated CLF1 header")
    tag, d = struct.unpack("<BI", data[4:9])
    if tag >= len(SOURCES):
        raise FormatError(f"unknown source tag {tag}")
    need = 9 + 8 * (3 * d + 1)
    if len(data) < need:
        raise LengthError(f"CLF1 payload truncated: {len(data)} < {need} bytes")
    arrays = np.frombuffer(bytes(data[9:9 + 24 * d]), dtype="<f8").astype(np.float64).reshape(3, d)
    (bias,) = struct.unpack("<d", data[9 + 24 * d:need])
    return ClassifierModel(arrays[0].copy(), arrays[1].copy(), arrays[2].copy(), bias, SOURCES[tag])


def write_model(path, model: ClassifierModel) -> None:
    Path(path).write_bytes(save_model(model))


def read_model(path) -> ClassifierModel:
    return load_model(Path(path).read_bytes())

"""
Binary logistic regression trained by full-batch descent.

Parameters are packed as ``theta = (w_1, ..., w_d, b)`` when handed to an
optimizer.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DivergenceError",
    "LogisticModel",
    "LossTrace",
    "bce_gradient",
    "bce_loss",
    "predict_proba",
    "sigmoid",
    "train",
]

EPS = 1e-12


class DivergenceError(RuntimeError):
    def __init__(self, step: int, value: float):
        super().__init__(f"training diverged at step {step}: loss = {value!r}")
        self.step = step
        self.value = value


@dataclass
class LogisticModel:
    w: np.ndarray
    b: float = 0.0

    @classmethod
    def zeros(cls, d: int) -> "LogisticModel":
        return cls(np.zeros(d), 0.0)

    @classmethod
    def from_params(cls, theta) -> "LogisticModel":
        theta = np.asarray(theta, dtype=float)
        return cls(theta[:-1].copy(), float(theta[-1]))

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def params(self) -> np.ndarray:
        return np.append(self.w, self.b)


@dataclass
class LossTrace:
    steps: list = field(default_factory=list)
    train: list = field(default_factory=list)
    val: list | None = None

    def append(self, step, train_loss, val_loss=None):
        if self.steps and step <= self.steps[-1]:
            raise ValueError("step indices must be strictly increasing")
        self.steps.append(step)
        self.train.append(train_loss)
        if val_loss is not None:
            if self.val is None:
                self.val = []
            self.val.append(val_loss)

    def __len__(self):
        return len(self.steps)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if self.val is None:
                writer.writerow(["step", "train_loss"])
                for row in zip(self.steps, self.train):
                    writer.writerow([row[0], repr(float(row[1]))])
            else:
                writer.writerow(["step", "train_loss", "val_loss"])
                for s, tr, va in zip(self.steps, self.train, self.val):
                    writer.writerow([s, repr(float(tr)), repr(float(va))])


def sigmoid(z):
    """Logistic function, split by sign so neither branch overflows."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def predict_proba(model: LogisticModel, x):
    """P(y = 1 | x) for a single feature vector or each row of a matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != model.dim:
        raise ValueError(f"dimension mismatch: model has {model.dim} features, input has {x.shape[-1]}")
    p = sigmoid(x @ model.w + model.b)
    return float(p) if p.ndim == 0 else p


def _check_xy(model, X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("empty dataset")
    if y.shape != (X.shape[0],):
        raise ValueError(f"label vector shape {y.shape} does not match {X.shape[0]} rows")
    if X.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: model has {model.dim} features, data has {X.shape[1]}")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return X, y


def bce_loss(model: LogisticModel, X, y) -> float:
    """Mean binary cross-entropy with probabilities clamped to [1e-12, 1 - 1e-12]."""
    X, y = _check_xy(model, X, y)
    p = np.clip(sigmoid(X @ model.w + model.b), EPS, 1.0 - EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def bce_gradient(model: LogisticModel, X, y):
    """Exact gradient of :func:`bce_loss`, returned as ``(grad_w, grad_b)``."""
    X, y = _check_xy(model, X, y)
    r = sigmoid(X @ model.w + model.b) - y
    n = X.shape[0]
    return X.T @ r / n, float(r.sum() / n)


def train(model, dataset, optimizer, epochs, val=None, grad_noise=0.0, noise_seed=0):
    """Full-batch training loop.

    Parameters
    ----------
    model : LogisticModel
        Starting point; not modified.
    dataset : Dataset
        Anything with ``X`` and ``y`` attributes.
    optimizer : ClassicalGD or WeylOptimizer
        Used as-is, so reset it first if it has been stepped before.
    epochs : int
        Number of full-batch updates.
    val : Dataset, optional
        If given, its loss is recorded alongside the training loss.
    grad_noise : float
        Standard deviation of Gaussian noise added to every gradient
        coordinate, emulating mini-batch sampling noise. Zero disables it.
    noise_seed : int
        Seed for the noise stream.

    Returns
    -------
    (LogisticModel, LossTrace)
        Loss is recorded after each update, at steps ``1..epochs``.
    """
    if int(epochs) != epochs or epochs < 1:
        raise ValueError(f"epochs must be a positive integer, got {epochs!r}")
    X, y = _check_xy(model, dataset.X, dataset.y)
    if val is not None:
        Xv, yv = _check_xy(model, val.X, val.y)
    rng = np.random.default_rng(noise_seed) if grad_noise > 0 else None

    theta = model.params()
    current = LogisticModel.from_params(theta)
    trace = LossTrace()
    for step in range(1, int(epochs) + 1):
        gw, gb = bce_gradient(current, X, y)
        g = np.append(gw, gb)
        if rng is not None:
            g = g + rng.normal(0.0, grad_noise, size=g.shape[0])
        theta = optimizer.step(theta, g)
        if not np.all(np.isfinite(theta)):
            raise DivergenceError(step, math.nan)
        current = LogisticModel.from_params(theta)
        loss = bce_loss(current, X, y)
        if not math.isfinite(loss):
            raise DivergenceError(step, loss)
        trace.append(step, loss, bce_loss(current, Xv, yv) if val is not None else None)
    return current, trace

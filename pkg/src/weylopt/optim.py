"""
Optimizers: classical gradient descent and the Weighted Weyl Optimizer.

Both take and return flat parameter vectors; the model decides how to pack
its parameters. The Weyl variant keeps the last ``L`` raw gradients in a ring
buffer and descends along their kernel-weighted combination, so each step
costs O(L*d) regardless of how many steps have been taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from weylopt.fracmem import (
    ConfigError,
    KernelCoefficients,
    Logarithmic,
    Rational,
    ScaleKind,
    WeightKind,
    kernel_coefficients,
)

__all__ = [
    "ClassicalGD",
    "GradientHistory",
    "WeylConfig",
    "WeylOptimizer",
    "classical_step",
    "effective_gradient",
]


def _as_vector(x, name):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    return arr


def classical_step(params, g, lr: float) -> np.ndarray:
    """Markovian update ``params - lr * g``."""
    params = _as_vector(params, "params")
    g = _as_vector(g, "gradient")
    if params.shape != g.shape:
        raise ValueError(f"dimension mismatch: params {params.shape} vs gradient {g.shape}")
    return params - lr * g


class GradientHistory:
    """Fixed-capacity, age-ordered store of gradient vectors.

    Age 0 is the most recent push. Pushing at capacity evicts the oldest
    entry. An empty history stands for an all-zero pre-initialization past.
    """

    def __init__(self, capacity: int, dim: int | None = None):
        if int(capacity) != capacity or capacity < 1:
            raise ConfigError(f"capacity must be a positive integer, got {capacity!r}")
        self.capacity = int(capacity)
        self.dim = None
        self._buf = None
        self._head = -1  # slot of age 0
        self._size = 0
        if dim is not None:
            self._allocate(int(dim))

    def _allocate(self, dim):
        if dim < 1:
            raise ValueError(f"gradient dimension must be >= 1, got {dim}")
        self.dim = dim
        self._buf = np.zeros((self.capacity, dim))

    def push(self, g) -> None:
        g = _as_vector(g, "gradient")
        if self._buf is None:
            self._allocate(g.shape[0])
        elif g.shape[0] != self.dim:
            raise ValueError(f"dimension mismatch: history holds {self.dim}-vectors, got {g.shape[0]}")
        self._head = (self._head + 1) % self.capacity
        self._buf[self._head] = g
        self._size = min(self._size + 1, self.capacity)

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, age: int) -> np.ndarray:
        if not 0 <= age < self._size:
            raise IndexError(f"age {age} out of range for history of length {self._size}")
        return self._buf[(self._head - age) % self.capacity].copy()

    def ordered(self) -> np.ndarray:
        """Stored gradients as an ``(len, dim)`` array, row ``k`` holding age ``k``."""
        if self._size == 0:
            return np.empty((0, self.dim or 0))
        slots = (self._head - np.arange(self._size)) % self.capacity
        return self._buf[slots]

    def clear(self) -> None:
        self._head = -1
        self._size = 0
        if self._buf is not None:
            self._buf[:] = 0.0


def effective_gradient(history: GradientHistory, coeffs: KernelCoefficients) -> np.ndarray:
    """Kernel-weighted combination of the stored gradients.

    Ages beyond the current history length contribute zero. For normalized
    coefficients the weights are renormalized over the entries present, so
    the result is a convex combination even during warm-up.
    """
    n = len(history)
    if n == 0:
        raise ValueError("effective gradient of an empty history")
    n = min(n, coeffs.window)
    c = coeffs.coeffs[:n]
    if coeffs.normalized and n < coeffs.window:
        c = c / c.sum()
    return c @ history.ordered()[:n]


@dataclass(frozen=True)
class WeylConfig:
    alpha: float = 0.6
    window: int = 64
    scale: ScaleKind = field(default_factory=Logarithmic)
    weight: WeightKind = field(default_factory=lambda: Rational(0.1))
    normalize: bool = True
    learning_rate: float = 0.1

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if int(self.window) != self.window or self.window < 1:
            raise ConfigError(f"window must be a positive integer, got {self.window!r}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate!r}")


class ClassicalGD:
    """Plain gradient descent with a fixed learning rate."""

    def __init__(self, learning_rate: float = 0.1):
        if not learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {learning_rate!r}")
        self.learning_rate = float(learning_rate)
        self.step_count = 0

    def step(self, params, g) -> np.ndarray:
        out = classical_step(params, g, self.learning_rate)
        self.step_count += 1
        return out

    def reset(self) -> "ClassicalGD":
        self.step_count = 0
        return self

    def __repr__(self):
        return f"ClassicalGD(learning_rate={self.learning_rate})"


class WeylOptimizer:
    """Gradient descent along the truncated weighted Weyl integral of the gradient history.

    Coefficients depend only on the config (they are indexed by memory age),
    so they are built once here and reused for every step.

    Examples
    --------
    >>> opt = WeylOptimizer(WeylConfig(alpha=0.6, window=8, learning_rate=0.5))
    >>> opt.step(np.zeros(2), np.array([1.0, -2.0]))
    array([-0.5,  1. ])
    """

    def __init__(self, config: WeylConfig | None = None, **kwargs):
        if config is None:
            config = WeylConfig(**kwargs)
        elif kwargs:
            raise TypeError("pass either a WeylConfig or keyword arguments, not both")
        self.config = config
        self.coeffs = kernel_coefficients(
            config.alpha, config.scale, config.weight, config.window, config.normalize
        )
        self.history = GradientHistory(config.window)
        self.step_count = 0
        self.last_effective = None

    @property
    def learning_rate(self) -> float:
        return self.config.learning_rate

    def step(self, params, g) -> np.ndarray:
        params = _as_vector(params, "params")
        g = _as_vector(g, "gradient")
        if params.shape != g.shape:
            raise ValueError(f"dimension mismatch: params {params.shape} vs gradient {g.shape}")
        self.history.push(g)
        G = effective_gradient(self.history, self.coeffs)
        self.last_effective = G
        self.step_count += 1
        return params - self.config.learning_rate * G

    def reset(self) -> "WeylOptimizer":
        self.history.clear()
        self.step_count = 0
        self.last_effective = None
        return self

    def __repr__(self):
        return f"WeylOptimizer({self.config!r})"

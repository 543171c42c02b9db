"""
Discrete kernel for the weighted psi-Weyl fractional integral.

The gradient history is treated as piecewise constant over unit memory-age
intervals ``[a, a+1)``. On each interval the power-law kernel is integrated
exactly, so the singularity of ``psi(s)**(alpha-1)`` at age zero never has to
be sampled::

    c_a = omega(a) * (psi(a+1)**alpha - psi(a)**alpha) / Gamma(alpha+1)

Both the scale ``psi`` and the weight ``omega`` are functions of memory age,
so ``omega(0) = 1`` and the ``1/omega(t)`` prefactor drops out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ConfigError",
    "Constant",
    "DomainError",
    "Identity",
    "KernelCoefficients",
    "Logarithmic",
    "Power",
    "Rational",
    "ScaleKind",
    "WeightKind",
    "gamma",
    "kernel_coefficients",
    "kernel_quadrature_oracle",
    "psi_eval",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class ConfigError(ValueError):
    """Invalid hyperparameter or construction argument."""


# Lanczos approximation, g = 7, n = 9. Relative error is ~1e-15 for x >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function for positive real ``x``.

    Integers are exact factorials. Otherwise uses the Lanczos approximation;
    arguments below 0.5 are shifted up with ``Gamma(x) = Gamma(x + 1) / x``.
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"gamma requires a finite x > 0, got {x!r}")
    if x.is_integer() and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return gamma(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


# -- scale functions (memory-age time warps) --------------------------------


@dataclass(frozen=True)
class Logarithmic:
    """psi(a) = ln(a + 1)."""

    def psi(self, a):
        return np.log1p(a)

    def dpsi(self, a):
        return 1.0 / (1.0 + a)


@dataclass(frozen=True)
class Identity:
    """psi(a) = a."""

    def psi(self, a):
        return a * 1.0

    def dpsi(self, a):
        return np.ones_like(a, dtype=float) if isinstance(a, np.ndarray) else 1.0


@dataclass(frozen=True)
class Power:
    """psi(a) = (a + 1)**p - 1."""

    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ConfigError(f"Power scale needs p > 0, got {self.p!r}")

    def psi(self, a):
        return np.expm1(self.p * np.log1p(a))

    def dpsi(self, a):
        return self.p * (1.0 + a) ** (self.p - 1.0)


ScaleKind = Union[Logarithmic, Identity, Power]


# -- weight functions --------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    """omega(a) = 1 / (1 + c*a)."""

    c: float

    def __post_init__(self):
        if not self.c >= 0:
            raise ConfigError(f"Rational weight needs c >= 0, got {self.c!r}")

    def omega(self, a):
        return 1.0 / (1.0 + self.c * a)


@dataclass(frozen=True)
class Constant:
    """omega(a) = 1."""

    def omega(self, a):
        return np.ones_like(a, dtype=float) if isinstance(a, np.ndarray) else 1.0


WeightKind = Union[Rational, Constant]


def psi_eval(kind: ScaleKind, a: float) -> float:
    """Evaluate the scale function at memory age ``a >= 0``."""
    if not a >= 0:
        raise DomainError(f"memory age must be >= 0, got {a!r}")
    return float(kind.psi(float(a)))


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 1.0):
        raise ConfigError(f"alpha must lie in (0, 1], got {alpha!r}")


@dataclass(frozen=True)
class KernelCoefficients:
    """Per-age weights over a memory window; ``coeffs[0]`` is the current gradient."""

    alpha: float
    window: int
    coeffs: np.ndarray
    normalized: bool

    def __post_init__(self):
        self.coeffs.setflags(write=False)

    def __len__(self) -> int:
        return self.window


def _power_increments(psi_lo: np.ndarray, psi_hi: np.ndarray, alpha: float) -> np.ndarray:
    # hi**alpha - lo**alpha without cancellation: lo**alpha * expm1(alpha*log(hi/lo)).
    if alpha == 1.0:
        return psi_hi - psi_lo
    out = np.empty_like(psi_hi)
    zero = psi_lo == 0.0
    out[zero] = psi_hi[zero] ** alpha
    lo = psi_lo[~zero]
    hi = psi_hi[~zero]
    out[~zero] = lo**alpha * np.expm1(alpha * (np.log(hi) - np.log(lo)))
    return out


def kernel_coefficients(
    alpha: float,
    kind: ScaleKind,
    weight: WeightKind,
    L: int,
    normalize: bool = True,
) -> KernelCoefficients:
    """Exact per-interval integrals of the Weyl kernel, scaled by the age weight.

    Parameters
    ----------
    alpha : float
        Fractional memory order in (0, 1].
    kind : ScaleKind
        Memory-age time warp ``psi``.
    weight : WeightKind
        Age weight ``omega``, sampled at the integer age of each stored gradient.
    L : int
        Window length (number of stored gradients).
    normalize : bool
        Divide by the coefficient sum so the weights form a convex combination.
    """
    _check_alpha(alpha)
    if int(L) != L or L < 1:
        raise ConfigError(f"window length must be a positive integer, got {L!r}")
    L = int(L)
    ages = np.arange(L, dtype=float)
    psi_lo = np.asarray(kind.psi(ages), dtype=float)
    psi_hi = np.asarray(kind.psi(ages + 1.0), dtype=float)
    c = _power_increments(psi_lo, psi_hi, alpha) / gamma(alpha + 1.0)
    c = c * weight.omega(ages)
    if not np.all(np.isfinite(c)) or np.any(c < 0):
        raise ConfigError("kernel coefficients are not finite and non-negative")
    if normalize:
        c = c / c.sum()
    return KernelCoefficients(alpha=float(alpha), window=L, coeffs=c, normalized=bool(normalize))


def kernel_quadrature_oracle(alpha: float, kind: ScaleKind, weight: WeightKind, a: int) -> float:
    """Raw coefficient for age ``a`` by adaptive quadrature in the original variable.

    Independent of the closed form used by :func:`kernel_coefficients`. On the
    first interval the integrand ``psi(s)**(alpha-1) * psi'(s)`` is written as
    ``s**(alpha-1) * (psi(s)/s)**(alpha-1) * psi'(s)`` and QUADPACK's algebraic
    endpoint weight absorbs the ``s**(alpha-1)`` factor.
    """
    from scipy import integrate

    _check_alpha(alpha)
    if int(a) != a or a < 0:
        raise DomainError(f"age must be a non-negative integer, got {a!r}")
    a = int(a)
    lo, hi = float(a), float(a + 1)
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)

    if a == 0:
        slope0 = float(kind.dpsi(0.0))

        def smooth(s):
            if s == 0.0:
                return slope0 ** (alpha - 1.0) * slope0
            return (float(kind.psi(s)) / s) ** (alpha - 1.0) * float(kind.dpsi(s))

        val, _ = integrate.quad(smooth, lo, hi, weight="alg", wvar=(alpha - 1.0, 0.0), **opts)
    else:

        def f(s):
            return float(kind.psi(s)) ** (alpha - 1.0) * float(kind.dpsi(s))

        val, _ = integrate.quad(f, lo, hi, **opts)
    return float(weight.omega(float(a))) * val / gamma(alpha)

"""
weylopt: gradient descent with power-law gradient memory.

The effective gradient at each step is a kernel-weighted combination of the
last ``L`` raw gradients, where the kernel is the weighted psi-Weyl fractional
integral discretized over unit memory ages.

Main entry points::

    from weylopt import WeylConfig, WeylOptimizer, ClassicalGD
    from weylopt import kernel_coefficients, Logarithmic, Rational
    from weylopt import LogisticModel, train
    from weylopt import synth_imbalanced, stratified_split, standardize
    from weylopt import pr_curve, total_variation

The experiment runner lives in ``weylopt.harness`` (``python -m weylopt``).
"""

from weylopt.fracmem import (
    Constant,
    Identity,
    KernelCoefficients,
    Logarithmic,
    Power,
    Rational,
    gamma,
    kernel_coefficients,
    kernel_quadrature_oracle,
    psi_eval,
)
from weylopt.optim import (
    ClassicalGD,
    GradientHistory,
    WeylConfig,
    WeylOptimizer,
    classical_step,
    effective_gradient,
)
from weylopt.model import DivergenceError, LogisticModel, LossTrace, bce_gradient, bce_loss, predict_proba, train
from weylopt.data import Dataset, load_csv, standardize, stratified_split, synth_imbalanced
from weylopt.metrics import PRCurve, pr_auc_oracle, pr_curve, total_variation

__version__ = "0.1.0"

__all__ = [
    "ClassicalGD",
    "Constant",
    "Dataset",
    "DivergenceError",
    "GradientHistory",
    "Identity",
    "KernelCoefficients",
    "Logarithmic",
    "LogisticModel",
    "LossTrace",
    "PRCurve",
    "Power",
    "Rational",
    "WeylConfig",
    "WeylOptimizer",
    "bce_gradient",
    "bce_loss",
    "classical_step",
    "effective_gradient",
    "gamma",
    "kernel_coefficients",
    "kernel_quadrature_oracle",
    "load_csv",
    "pr_auc_oracle",
    "pr_curve",
    "predict_proba",
    "psi_eval",
    "standardize",
    "stratified_split",
    "synth_imbalanced",
    "total_variation",
    "train",
]

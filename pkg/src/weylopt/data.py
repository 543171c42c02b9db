"""
Datasets: CSV ingestion, standardization, stratified splits and a synthetic
extreme-imbalance generator.

All randomness here goes through :class:`XorShift64Star`, a fully specified
generator, so a seed reproduces the same data on any platform::

    seeding (splitmix64):  z = seed + 0x9E3779B97F4A7C15
                           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
                           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
                           state = z ^ (z >> 31)          (0 replaced by 1)
    step (xorshift64*):    x ^= x >> 12; x ^= x << 25; x ^= x >> 27
                           out = x * 0x2545F4914F6CDD1D
    uniform in [0, 1):     (out >> 11) * 2**-53
    standard normal:       Box-Muller on (1 - u1, u2), cosine branch only
    below(n):              floor(uniform * n)

All products are taken modulo 2**64.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CSVError",
    "Dataset",
    "EmptyBodyError",
    "MissingColumnError",
    "ParseError",
    "StandardizationStats",
    "XorShift64Star",
    "load_csv",
    "standardize",
    "stratified_split",
    "synth_imbalanced",
]

_MASK = (1 << 64) - 1
STD_FLOOR = 1e-12


class XorShift64Star:
    def __init__(self, seed: int):
        z = (int(seed) + 0x9E3779B97F4A7C15) & _MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        z ^= z >> 31
        self.state = z or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def normal(self) -> float:
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, n: int) -> int:
        return int(self.uniform() * n)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"dataset needs at least one row and one feature, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise ValueError(f"label vector shape {y.shape} does not match {X.shape[0]} rows")
        if not np.all(np.isfinite(X)):
            raise ValueError("dataset contains non-finite feature values")
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("labels must be 0 or 1")
        if len(self.feature_names) != X.shape[1]:
            raise ValueError("feature_names length does not match feature count")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def prevalence(self) -> float:
        return float(self.y.mean())

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], self.feature_names)


# -- CSV ----------------------------------------------------------------------


class CSVError(ValueError):
    """Base class for malformed dataset files."""


class MissingColumnError(CSVError):
    pass


class EmptyBodyError(CSVError):
    pass


class ParseError(CSVError):
    def __init__(self, row: int, column: str, value: str):
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a finite number")
        self.row = row
        self.column = column
        self.value = value


def load_csv(path, label_column: str, positive_label: str) -> Dataset:
    """Read a headed, comma-separated file into a :class:`Dataset`.

    Every column other than ``label_column`` must be numeric. Rows whose
    label equals ``positive_label`` (after stripping whitespace) become 1,
    all others 0. Row numbers in errors count data rows from 1.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such dataset file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyBodyError(f"{path}: file is empty (no header)")
        header = [h.strip() for h in header]
        if label_column not in header:
            raise MissingColumnError(f"{path}: label column {label_column!r} not in header {header}")
        li = header.index(label_column)
        feature_cols = [i for i in range(len(header)) if i != li]
        names = [header[i] for i in feature_cols]
        rows, labels = [], []
        for rownum, record in enumerate(reader, start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise CSVError(f"{path}: row {rownum} has {len(record)} fields, header has {len(header)}")
            vals = []
            for i in feature_cols:
                cell = record[i].strip()
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(rownum, header[i], cell) from None
                if not math.isfinite(v):
                    raise ParseError(rownum, header[i], cell)
                vals.append(v)
            rows.append(vals)
            labels.append(1 if record[li].strip() == positive_label else 0)
    if not rows:
        raise EmptyBodyError(f"{path}: header present but no data rows")
    if not names:
        raise CSVError(f"{path}: no feature columns besides {label_column!r}")
    return Dataset(np.array(rows, dtype=float), np.array(labels), tuple(names))


# -- preprocessing ------------------------------------------------------------


@dataclass(frozen=True)
class StandardizationStats:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, ds: Dataset) -> Dataset:
        if ds.d != self.mean.shape[0]:
            raise ValueError(f"dimension mismatch: stats for {self.mean.shape[0]} features, dataset has {ds.d}")
        return Dataset((ds.X - self.mean) / self.std, ds.y, ds.feature_names)


def standardize(train: Dataset, others=()):
    """Z-score ``train`` and every dataset in ``others`` with training statistics.

    Uses the population standard deviation, floored at 1e-12 so constant
    columns map to zero.
    """
    mean = train.X.mean(axis=0)
    std = np.maximum(train.X.std(axis=0), STD_FLOOR)
    stats = StandardizationStats(mean, std)
    return stats, [stats.apply(train)] + [stats.apply(ds) for ds in others]


def stratified_split(dataset: Dataset, test_fraction: float, seed: int):
    """Per-class shuffled split into ``(train, test)``.

    Each class sends ``round(count * test_fraction)`` rows to the test side,
    clamped so both sides keep at least one row of every class. Rows keep
    their original relative order within each side.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction!r}")
    rng = XorShift64Star(seed)
    test_idx = []
    for label in (0, 1):
        members = [int(i) for i in np.flatnonzero(dataset.y == label)]
        if len(members) < 2:
            raise ValueError(f"class {label} has {len(members)} samples; stratified split needs at least 2")
        rng.shuffle(members)
        k = min(max(_round_half_up(len(members) * test_fraction), 1), len(members) - 1)
        test_idx.extend(members[:k])
    mask = np.zeros(dataset.n, dtype=bool)
    mask[test_idx] = True
    return dataset.subset(np.flatnonzero(~mask)), dataset.subset(np.flatnonzero(mask))


def synth_imbalanced(n: int, d: int, positive_rate: float, separation: float, seed: int) -> Dataset:
    """Two Gaussian classes with a rare positive class.

    Negatives are standard normal in ``d`` dimensions; positives share the
    identity covariance but are shifted by ``separation / sqrt(d)`` along every
    axis, so the class means are ``separation`` apart. Exactly
    ``round(n * positive_rate)`` rows are positive.
    """
    if not 0.0 < positive_rate < 0.5:
        raise ValueError(f"positive_rate must lie in (0, 0.5), got {positive_rate!r}")
    if separation < 0:
        raise ValueError(f"separation must be >= 0, got {separation!r}")
    if n * positive_rate < 10:
        raise ValueError(f"n * positive_rate = {n * positive_rate:g}; need at least 10 positives")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    rng = XorShift64Star(seed)
    k = _round_half_up(n * positive_rate)
    labels = [1] * k + [0] * (n - k)
    rng.shuffle(labels)
    shift = separation / math.sqrt(d)
    X = np.array([[rng.normal() for _ in range(d)] for _ in range(n)])
    y = np.array(labels)
    X[y == 1] += shift
    return Dataset(X, y, tuple(f"x{j}" for j in range(d)))

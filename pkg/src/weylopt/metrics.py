"""Precision-recall evaluation and loss-trace smoothness."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = ["PRCurve", "pr_auc_oracle", "pr_curve", "total_variation"]


@dataclass(frozen=True)
class PRCurve:
    """Operating points ordered by decreasing threshold (so recall is non-decreasing).

    ``auc`` is average precision: the right-step sum of precision over recall
    increments. No linear interpolation between points.
    """

    thresholds: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    auc: float

    @property
    def points(self):
        return list(zip(self.thresholds.tolist(), self.precision.tolist(), self.recall.tolist()))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "precision", "recall"])
            for t, p, r in self.points:
                writer.writerow([repr(t), repr(p), repr(r)])


def _check(scores, labels):
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise ValueError(f"{scores.shape[0]} scores but {labels.shape[0]} labels")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be 0 or 1")
    labels = labels.astype(np.int64)
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == labels.shape[0]:
        raise ValueError("need at least one positive and one negative label")
    return scores, labels, n_pos


def pr_curve(scores, labels) -> PRCurve:
    """Precision and recall at every distinct score, with tied scores grouped."""
    scores, labels, n_pos = _check(scores, labels)
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    hits = labels[order]
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    tp = np.cumsum(hits)[ends]
    predicted = ends + 1
    precision = tp / predicted
    recall = tp / n_pos
    gained = np.diff(np.r_[0, tp])
    auc = float(np.sum(gained / n_pos * precision))
    return PRCurve(s[ends], precision, recall, auc)


def pr_auc_oracle(scores, labels) -> float:
    """Average precision by direct counting at each distinct threshold, O(n^2)."""
    scores, labels, n_pos = _check(scores, labels)
    thresholds = sorted(set(scores.tolist()), reverse=True)
    auc = 0.0
    prev_tp = 0
    for t in thresholds:
        tp = 0
        predicted = 0
        for sc, lab in zip(scores.tolist(), labels.tolist()):
            if sc >= t:
                predicted += 1
                tp += lab
        auc += (tp - prev_tp) / n_pos * (tp / predicted)
        prev_tp = tp
    return auc


def total_variation(trace) -> float:
    """Sum of absolute successive differences."""
    x = np.asarray(trace, dtype=float).ravel()
    if x.shape[0] < 2:
        raise ValueError("total variation needs at least two values")
    return float(np.abs(np.diff(x)).sum())

"""Correlation and error metrics for judge calibration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ZeroVariance(ValueError):
    """Correlation undefined because an input vector is constant.

    The squared error is still well-defined and carried on the exception.
    """

    def __init__(self, mse: float):
        super().__init__("correlation undefined for a constant vector")
        self.mse = mse


@dataclass(frozen=True)
class CalibrationReport:
    pearson: float
    spearman: float
    mse: float
    n: int


def fractional_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the average of their positions."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=float)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("inputs must be 1-D vectors of equal length")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da * da).sum() * (db * db).sum())
    if denom == 0.0:
        raise ZeroVariance(mse=float(((a - b) ** 2).mean()))
    return float((da * db).sum() / denom)


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of fractional (average) ranks."""
    return pearson(fractional_ranks(x), fractional_ranks(y))


def mean_squared_error(x: Sequence[float], y: Sequence[float]) -> float:
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise ValueError("inputs must have equal length")
    return float(((a - b) ** 2).mean())


def calibrate(
    judge_scores: Sequence[float], human_scores: Sequence[float]
) -> CalibrationReport:
    """Agreement between judge scores and (averaged) human scores.

    Raises :class:`ZeroVariance` when either vector is constant; the
    exception carries the MSE, which stays defined.
    """
    if len(judge_scores) != len(human_scores):
        raise ValueError("vectors must have equal length")
    if len(judge_scores) < 2:
        raise ValueError("need at least 2 paired samples")
    mse = mean_squared_error(judge_scores, human_scores)
    try:
        p = pearson(judge_scores, human_scores)
        s = spearman(judge_scores, human_scores)
    except ZeroVariance:
        raise ZeroVariance(mse=mse) from None
    return CalibrationReport(pearson=p, spearman=s, mse=mse, n=len(judge_scores))

"""Regression metrics in physical units: coefficient of determination and MAE."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class UndefinedMetricError(ValueError):
    """Raised when a metric has no defined value, e.g. R^2 of a constant target."""


@dataclass(frozen=True)
class MetricPair:
    r2: float
    mae: float


def _check_pair(actual, predicted):
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.shape != predicted.shape or actual.ndim != 1:
        raise ValueError(
            f"need equal-length 1-d vectors, got {actual.shape} and {predicted.shape}"
        )
    if actual.size == 0:
        raise ValueError("metrics need at least one sample")
    return actual, predicted


def r2(actual, predicted) -> float:
    """1 - SS_residual / SS_total. Undefined when the actual values are constant."""
    actual, predicted = _check_pair(actual, predicted)
    ss_total = float(np.sum((actual - actual.mean()) ** 2))
    if ss_total == 0.0:
        raise UndefinedMetricError("R^2 undefined: actual values are constant")
    ss_residual = float(np.sum((actual - predicted) ** 2))
    return 1.0 - ss_residual / ss_total


def mae(actual, predicted) -> float:
    """Mean absolute error."""
    actual, predicted = _check_pair(actual, predicted)
    return float(np.mean(np.abs(actual - predicted)))


def metric_pair(actual, predicted) -> MetricPair:
    return MetricPair(r2=r2(actual, predicted), mae=mae(actual, predicted))

"""Mean absolute error and mean squared error."""

from dataclasses import dataclass

import numpy as np

from .errors import MetricError


@dataclass(frozen=True)
class MetricPair:
    """MAE/MSE over n prediction pairs.  mae_db**2 <= mse_db2 always holds."""

    mae_db: float
    mse_db2: float
    n: int


def _checked(actual, predicted):
    a = np.asarray(actual, dtype=np.float64)
    p = np.asarray(predicted, dtype=np.float64)
    if a.ndim != 1 or a.shape != p.shape:
        raise MetricError(f"length mismatch: {a.shape} vs {p.shape}")
    if a.size == 0:
        raise MetricError("empty input")
    if not (np.isfinite(a).all() and np.isfinite(p).all()):
        raise MetricError("non-finite value in input")
    return a, p


def mae(actual, predicted) -> float:
    """(1/n) * sum |y_i - yhat_i|"""
    a, p = _checked(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def mse(actual, predicted) -> float:
    """(1/n) * sum (y_i - yhat_i)^2"""
    a, p = _checked(actual, predicted)
    d = a - p
    return float(np.mean(d * d))


def metric_pair(actual, predicted) -> MetricPair:
    a, p = _checked(actual, predicted)
    d = a - p
    return MetricPair(float(np.mean(np.abs(d))), float(np.mean(d * d)), int(a.size))

"""
Rating-prediction error metrics.
"""

import numpy as np

from ..errors import MetricError
from ..models.enums import Metric


def _errors(predicted, actual) -> np.ndarray:
    predicted = np.asarray(predicted, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    if predicted.shape != actual.shape:
        raise MetricError(f"shape mismatch: {predicted.shape} vs {actual.shape}")
    if predicted.size == 0:
        raise MetricError("cannot score an empty set of predictions")
    return predicted - actual


def rmse(predicted, actual) -> float:
    """Root mean squared error."""
    errors = _errors(predicted, actual)
    return float(np.sqrt(np.mean(errors**2)))


def mae(predicted, actual) -> float:
    """Mean absolute error."""
    errors = _errors(predicted, actual)
    return float(np.mean(np.abs(errors)))


_METRICS = {Metric.RMSE: rmse, Metric.MAE: mae}


def compute_metric(metric: Metric | str, predicted, actual) -> float:
    return _METRICS[Metric(metric)](predicted, actual)


def compute_all(predicted, actual) -> dict[str, float]:
    """Every supported metric, keyed by name."""
    return {metric.value: fn(predicted, actual) for metric, fn in _METRICS.items()}

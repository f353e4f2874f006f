"""Metrics and cross-validated evaluation."""

from .cross_validation import cross_validate
from .metrics import compute_all, compute_metric, mae, rmse

__all__ = ["cross_validate", "compute_all", "compute_metric", "mae", "rmse"]

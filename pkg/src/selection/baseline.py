"""
Random-predictor baseline every algorithm has to beat.
"""

from typing import Optional

from loguru import logger

from ..algorithms.registry import get_algorithm
from ..data.folds import FoldPlan, kfold_split
from ..data.ratings import RatingsTable
from ..evaluation.cross_validation import cross_validate
from ..models.enums import AlgorithmName, Metric


def compute_baseline(
    table: RatingsTable,
    metric: Metric | str,
    cv_folds: int,
    seed: int,
    folds: Optional[FoldPlan] = None,
) -> float:
    """
    Cross-validated loss of the Normal Predictor.

    Args:
        table: Ratings
        metric: Target metric
        cv_folds: Fold count (ignored when ``folds`` is given)
        seed: Seed for the folds and the predictor
        folds: Precomputed fold plan to share with the search

    Returns:
        Mean loss over the folds
    """
    folds = folds if folds is not None else kfold_split(table, cv_folds, seed)
    result = cross_validate(
        get_algorithm(AlgorithmName.NORMAL_PREDICTOR), {}, table, folds, metric, seed
    )
    logger.info(f"Baseline (NormalPredictor) {Metric(metric).value}: {result.mean_loss:.4f}")
    return result.mean_loss

"""
Cross-validated evaluation of one (algorithm, assignment) pair.
"""

import time

import numpy as np
from loguru import logger

from ..algorithms.registry import AlgorithmSpec
from ..data.folds import FoldPlan
from ..data.ratings import RatingsTable
from ..data.trainset import Trainset
from ..errors import FoldEvaluationError
from ..models.enums import Metric
from ..models.schemas import EvalResult, ParamAssignment
from ..utils.seeding import derive_seed
from .metrics import compute_all


def cross_validate(
    algo: AlgorithmSpec,
    assignment: ParamAssignment,
    table: RatingsTable,
    folds: FoldPlan,
    metric: Metric | str,
    seed: int,
) -> EvalResult:
    """
    Fit on k-1 folds, score the held-out fold, once per fold.

    Each fold's fit is seeded with ``derive_seed(seed, fold)`` so the result
    does not depend on which thread runs it or when.

    Args:
        algo: Algorithm to evaluate
        assignment: Hyperparameters (defaults fill the rest)
        table: Full ratings table the folds index into
        folds: Fold plan over ``table``
        metric: Metric reported as ``mean_loss``
        seed: Base seed

    Returns:
        EvalResult with per-fold losses and summed fit/test seconds

    Raises:
        FoldEvaluationError: Fitting or scoring failed on a fold
    """
    metric = Metric(metric)
    per_metric: dict[str, list[float]] = {m.value: [] for m in Metric}
    fit_time = 0.0
    test_time = 0.0

    for fold, train_idx, test_idx in folds.splits():
        try:
            started = time.perf_counter()
            model = algo.fit(Trainset.from_table(table, train_idx), assignment, derive_seed(seed, fold))
            fitted = time.perf_counter()
            estimates, _ = model.predict(table.users[test_idx], table.items[test_idx])
            scores = compute_all(estimates, table.values[test_idx])
            tested = time.perf_counter()
        except Exception as e:
            raise FoldEvaluationError(fold, e) from e

        fit_time += fitted - started
        test_time += tested - fitted
        for name, value in scores.items():
            per_metric[name].append(value)
        logger.debug(
            f"{algo.name.value} fold {fold}: {metric.value}={scores[metric.value]:.4f} "
            f"(fit {fitted - started:.2f}s)"
        )

    losses = per_metric[metric.value]
    return EvalResult(
        metric=metric,
        mean_loss=float(np.mean(losses)),
        per_fold_losses=losses,
        measures={name: float(np.mean(values)) for name, values in per_metric.items()},
        fit_time=fit_time,
        test_time=test_time,
    )

"""
Exhaustive grid search over explicit value lists.
"""

import itertools
from typing import Any, Mapping, Optional, Sequence

from loguru import logger

from ..algorithms.registry import AlgorithmSpec
from ..data.folds import FoldPlan
from ..data.ratings import RatingsTable
from ..errors import GridError, SelectionFailedError
from ..evaluation.cross_validation import cross_validate
from ..models.enums import AlgorithmName, Metric
from ..models.schemas import ParamAssignment, Trial
from .space import ParamSpace, default_space, find_domains
from .trials import best_trial, run_trial

DEFAULT_GRIDS: dict[AlgorithmName, dict[str, list[Any]]] = {
    AlgorithmName.SVD: {
        "n_factors": [50, 100, 150],
        "n_epochs": [20, 30],
        "lr": [0.002, 0.005, 0.01],
        "reg": [0.02, 0.1],
    },
    AlgorithmName.KNN_BASELINE: {
        "k": [20, 40, 60],
        "sim": ["msd", "pearson_baseline"],
        "user_based": [True, False],
    },
}


def validate_grid(
    algo: AlgorithmSpec, grid: Mapping[str, Sequence[Any]], space: Optional[ParamSpace] = None
) -> dict[str, list[Any]]:
    """
    Check a grid against an algorithm's parameters.

    Values outside the search space are allowed (a grid may deliberately
    reach past it) but logged.

    Raises:
        GridError: Empty grid, empty dimension, or unknown parameter name
    """
    if not grid:
        raise GridError("grid has no dimensions")
    space = space if space is not None else default_space(algo.name)
    checked: dict[str, list[Any]] = {}
    for key, values in grid.items():
        if key not in algo.defaults:
            raise GridError(
                f"{algo.name.value} has no parameter '{key}'; "
                f"known: {', '.join(sorted(algo.defaults)) or 'none'}",
                key=key,
            )
        if isinstance(values, (str, bytes)) or not isinstance(values, Sequence):
            raise GridError(f"grid entry '{key}' must be a list of values", key=key)
        if len(values) == 0:
            raise GridError(f"grid dimension '{key}' is empty", key=key)
        domains = find_domains(space, key)
        for value in values:
            if domains and not any(d.contains(value) for d in domains):
                logger.warning(f"Grid value {key}={value!r} lies outside the search space")
        checked[key] = list(values)
    return checked


def grid_points(grid: Mapping[str, Sequence[Any]]) -> list[ParamAssignment]:
    """Cartesian product in grid order: the last dimension varies fastest."""
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(
    algo: AlgorithmSpec,
    grid: Mapping[str, Sequence[Any]],
    table: RatingsTable,
    folds: FoldPlan,
    metric: Metric | str,
    seed: int,
) -> tuple[Trial, list[Trial]]:
    """
    Cross-validate every grid point.

    Every point is evaluated with the same seed, so a point equal to the
    algorithm defaults reproduces a plain evaluation on the same folds.

    Args:
        algo: Algorithm to tune
        grid: Parameter name -> explicit value list
        table: Ratings
        folds: Fold plan shared by all points
        metric: Target metric
        seed: Fit seed

    Returns:
        (best trial, all trials in grid order); ties go to the earlier point

    Raises:
        GridError: Malformed grid
        SelectionFailedError: Every grid point failed
    """
    checked = validate_grid(algo, grid)
    points = grid_points(checked)
    logger.info(f"Grid search over {len(points)} points for {algo.name.value}")

    def evaluate(assignment: ParamAssignment, trial_seed: int):
        return cross_validate(algo, assignment, table, folds, metric, trial_seed)

    trials = []
    for index, point in enumerate(points):
        trial = run_trial(index, point, seed, evaluate)
        trials.append(trial)
        if trial.ok:
            logger.info(f"{algo.name.value} grid #{index}: {trial.loss:.4f} {point}")

    best = best_trial(trials)
    if best is None:
        raise SelectionFailedError(f"every grid point failed for {algo.name.value}")
    return best, trials

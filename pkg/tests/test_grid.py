"""Tests for exhaustive grid search."""

from types import MappingProxyType

import numpy as np
import pytest

from src.algorithms.base import FittedModel
from src.algorithms.registry import AlgorithmSpec, get_algorithm
from src.data.folds import kfold_split
from src.errors import GridError, SelectionFailedError
from src.evaluation.cross_validation import cross_validate
from src.models.enums import AlgorithmName, Metric, TrialStatus
from src.search.grid import DEFAULT_GRIDS, grid_points, grid_search, validate_grid


class ConstantModel(FittedModel):
    name = AlgorithmName.SVD

    def __init__(self, train, value):
        super().__init__(train)
        self.value = value

    def _estimate(self, users, items):
        return np.full(len(users), self.value), np.zeros(len(users), dtype=bool)


def constant_spec() -> AlgorithmSpec:
    def fit(train, params, seed):
        if params["value"] < 0:
            raise ValueError("negative constant")
        return ConstantModel(train, params["value"])

    return AlgorithmSpec(
        name=AlgorithmName.SVD, defaults=MappingProxyType({"value": 3.0}), fit_function=fit
    )


def test_points_in_lexicographic_order():
    points = grid_points({"a": [1, 2], "b": ["x", "y"]})
    assert points == [
        {"a": 1, "b": "x"},
        {"a": 1, "b": "y"},
        {"a": 2, "b": "x"},
        {"a": 2, "b": "y"},
    ]


def test_product_size():
    assert len(grid_points({"a": [1, 2, 3], "b": [1, 2, 3, 4], "c": [0, 1]})) == 24


def test_default_svd_grid_has_36_points_including_defaults():
    points = grid_points(DEFAULT_GRIDS[AlgorithmName.SVD])
    defaults = dict(get_algorithm("svd").defaults)

    assert len(points) == 36
    assert defaults in points


def test_single_point_grid(constant_table):
    folds = kfold_split(constant_table, 3, seed=0)
    best, trials = grid_search(constant_spec(), {"value": [4.0]}, constant_table, folds, "rmse", 0)

    assert len(trials) == 1
    assert best == trials[0]
    assert best.loss == pytest.approx(0.0)


def test_finds_planted_optimum(constant_table):
    folds = kfold_split(constant_table, 3, seed=0)
    best, trials = grid_search(
        constant_spec(), {"value": [1.0, 2.0, 4.0, 5.0]}, constant_table, folds, Metric.MAE, 0
    )

    assert best.assignment == {"value": 4.0}
    assert [t.loss for t in trials] == pytest.approx([3.0, 2.0, 0.0, 1.0])


def test_failed_points_are_recorded(constant_table):
    folds = kfold_split(constant_table, 3, seed=0)
    best, trials = grid_search(
        constant_spec(), {"value": [-1.0, 4.0]}, constant_table, folds, Metric.RMSE, 0
    )

    assert trials[0].status == TrialStatus.FAILED
    assert best.index == 1


def test_every_point_failing(constant_table):
    folds = kfold_split(constant_table, 3, seed=0)
    with pytest.raises(SelectionFailedError):
        grid_search(constant_spec(), {"value": [-1.0]}, constant_table, folds, Metric.RMSE, 0)


def test_unknown_parameter():
    with pytest.raises(GridError) as info:
        validate_grid(get_algorithm("svd"), {"n_factors": [10], "depth": [3]})
    assert info.value.key == "depth"


def test_empty_dimension():
    with pytest.raises(GridError, match="empty"):
        validate_grid(get_algorithm("svd"), {"n_factors": []})


def test_empty_grid():
    with pytest.raises(GridError):
        validate_grid(get_algorithm("svd"), {})


def test_default_point_reproduces_plain_evaluation(small_table):
    spec = get_algorithm(AlgorithmName.BASELINE_ONLY)
    folds = kfold_split(small_table, 3, seed=2)
    best, _ = grid_search(spec, {"reg_u": [15.0], "reg_i": [10.0]}, small_table, folds, "rmse", 2)

    plain = cross_validate(spec, {}, small_table, folds, Metric.RMSE, 2)
    assert best.loss == plain.mean_loss

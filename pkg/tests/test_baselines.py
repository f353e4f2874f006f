"""Tests for bias estimation and the Baseline Only predictor."""

import numpy as np
import pytest

from src.algorithms.baselines import fit_baseline_only, fit_baselines
from src.data.ratings import RatingsTable
from src.data.trainset import Trainset
from src.errors import FitDivergedError


def toy_trainset(scale):
    table = RatingsTable.from_triples([("A", "x", 5), ("A", "y", 4), ("B", "x", 3)], scale)
    return Trainset.from_table(table)


def least_squares_predictions(train: Trainset) -> np.ndarray:
    design = np.zeros((train.n_ratings, train.n_users + train.n_items))
    rows = np.arange(train.n_ratings)
    design[rows, train.users] = 1.0
    design[rows, train.n_users + train.items] = 1.0
    solution, *_ = np.linalg.lstsq(design, train.values - train.global_mean, rcond=None)
    return train.global_mean + design @ solution


def test_als_without_regularization_matches_least_squares(scale):
    train = toy_trainset(scale)
    baselines = fit_baselines(train, method="als", epochs=50, reg_u=0.0, reg_i=0.0)

    fitted = baselines.estimate(train.users, train.items)
    np.testing.assert_allclose(fitted, least_squares_predictions(train), atol=1e-6)


def test_als_on_larger_table_matches_least_squares(small_table):
    train = Trainset.from_table(small_table)
    baselines = fit_baselines(train, method="als", epochs=2000, reg_u=0.0, reg_i=0.0)

    fitted = baselines.estimate(train.users, train.items)
    np.testing.assert_allclose(fitted, least_squares_predictions(train), atol=1e-6)


@pytest.mark.parametrize("method", ["als", "sgd"])
def test_constant_ratings_leave_biases_at_zero(constant_table, method):
    baselines = fit_baselines(Trainset.from_table(constant_table), method=method, epochs=7)

    assert baselines.mu == 4.0
    assert np.all(baselines.b_u == 0.0)
    assert np.all(baselines.b_i == 0.0)


def test_single_rating(scale):
    table = RatingsTable.from_triples([("u", "i", 5)], scale)
    baselines = fit_baselines(Trainset.from_table(table))

    assert baselines.mu == 5.0
    assert baselines.b_u.tolist() == [0.0]
    assert baselines.b_i.tolist() == [0.0]


def test_sgd_beats_global_mean(small_table):
    train = Trainset.from_table(small_table)
    baselines = fit_baselines(train, method="sgd", epochs=30, lr=0.01)

    fitted = baselines.estimate(train.users, train.items)
    assert np.mean((fitted - train.values) ** 2) < np.var(train.values)


def test_unknown_ids_get_zero_bias(small_table):
    baselines = fit_baselines(Trainset.from_table(small_table))
    assert baselines.estimate(np.array([-1]), np.array([-1]))[0] == baselines.mu


def test_sgd_divergence_is_reported(small_table):
    with pytest.raises(FitDivergedError):
        fit_baselines(Trainset.from_table(small_table), method="sgd", lr=1e6)


def test_baseline_only_scores_within_scale(small_table):
    model = fit_baseline_only(Trainset.from_table(small_table), method="als")
    estimates, impossible = model.predict(small_table.users, small_table.items)

    assert estimates.min() >= 1.0 and estimates.max() <= 5.0
    assert not impossible.any()

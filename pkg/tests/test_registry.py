"""Tests for the algorithm roster."""

import numpy as np
import pytest

from src.algorithms.registry import ALGORITHMS, build_model, get_algorithm
from src.data.trainset import Trainset
from src.errors import InvalidAssignmentError
from src.models.enums import AlgorithmName


def test_roster_has_eleven_algorithms():
    assert set(ALGORITHMS) == set(AlgorithmName)


@pytest.mark.parametrize("name", ["svd", "SVD", "knn-with-zscore", "KNNWithZScore"])
def test_lookup_by_slug_or_name(name):
    assert get_algorithm(name).name in (AlgorithmName.SVD, AlgorithmName.KNN_WITH_ZSCORE)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        get_algorithm("deep-magic")


def test_unknown_parameter_is_rejected():
    with pytest.raises(InvalidAssignmentError, match="depth"):
        get_algorithm(AlgorithmName.SVD).resolve({"depth": 3})


def test_resolve_overlays_defaults():
    resolved = get_algorithm(AlgorithmName.SVD).resolve({"n_factors": 7})
    assert resolved["n_factors"] == 7
    assert resolved["n_epochs"] == get_algorithm(AlgorithmName.SVD).defaults["n_epochs"]


@pytest.mark.parametrize("algo", list(AlgorithmName))
def test_every_algorithm_scores_within_scale(algo, small_table):
    train = Trainset.from_table(small_table)
    model = get_algorithm(algo).fit(train, {}, seed=0)

    users = np.concatenate([small_table.users[:50], [-1, train.n_users + 5]])
    items = np.concatenate([small_table.items[:50], [0, -1]])
    estimates, impossible = model.predict(users, items)

    assert np.isfinite(estimates).all()
    assert estimates.min() >= 1.0 and estimates.max() <= 5.0
    assert impossible.dtype == bool and len(impossible) == len(users)


def test_build_model_scores_raw_ids(small_table):
    model = build_model("baseline-only", {}, small_table, seed=0)

    known, _ = model.predict_raw("u0", "i0")
    unknown, impossible = model.predict_raw("nobody", "i0")
    assert 1.0 <= known <= 5.0
    assert 1.0 <= unknown <= 5.0
    assert not impossible

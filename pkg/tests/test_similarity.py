"""Tests for the similarity kernels against per-pair enumeration."""

import math

import numpy as np
import pytest

from src.algorithms.baselines import fit_baselines
from src.algorithms.similarity import compute_similarity
from src.data.ratings import RatingsTable
from src.data.trainset import Trainset

from .helpers import make_table


def dense(train: Trainset, values: np.ndarray, user_based: bool) -> np.ndarray:
    grid = np.full((train.n_users, train.n_items), np.nan)
    grid[train.users, train.items] = values
    return grid if user_based else grid.T


def pair_similarity(a, b, kind, shrinkage):
    common = ~np.isnan(a) & ~np.isnan(b)
    n = int(common.sum())
    if n == 0:
        return 0.0
    x, y = a[common], b[common]
    if kind == "cosine":
        denominator = math.sqrt((x**2).sum() * (y**2).sum())
        return 0.0 if denominator == 0 else float(np.clip(x @ y / denominator, 0, 1))
    if kind == "msd":
        return 1.0 / (np.mean((x - y) ** 2) + 1.0)
    if kind == "pearson":
        xc, yc = x - x.mean(), y - y.mean()
        denominator = math.sqrt((xc**2).sum() * (yc**2).sum())
        return 0.0 if denominator == 0 else float(np.clip(xc @ yc / denominator, -1, 1))
    denominator = math.sqrt((x**2).sum() * (y**2).sum())
    if denominator == 0:
        return 0.0
    return float(np.clip(x @ y / denominator * (n - 1) / (n - 1 + shrinkage), -1, 1))


def brute_force(train: Trainset, kind: str, user_based: bool, shrinkage: float = 100.0):
    values = train.values
    if kind == "pearson_baseline":
        values = values - fit_baselines(train).estimate(train.users, train.items)
    grid = dense(train, values, user_based)
    size = grid.shape[0]
    out = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            if a == b:
                out[a, b] = 1.0 if (~np.isnan(grid[a])).any() else 0.0
            else:
                out[a, b] = pair_similarity(grid[a], grid[b], kind, shrinkage)
    return out


@pytest.mark.parametrize("kind", ["cosine", "msd", "pearson", "pearson_baseline"])
@pytest.mark.parametrize("user_based", [True, False])
def test_matches_pairwise_enumeration(kind, user_based):
    train = Trainset.from_table(make_table(n_users=12, n_items=9, density=0.5, seed=2))
    sim = compute_similarity(train, kind=kind, user_based=user_based, shrinkage=10.0)

    np.testing.assert_allclose(sim.values, brute_force(train, kind, user_based, 10.0), atol=1e-9)


@pytest.mark.parametrize("kind", ["cosine", "msd", "pearson", "pearson_baseline"])
def test_symmetric_with_bounded_values(small_table, kind):
    sim = compute_similarity(Trainset.from_table(small_table), kind=kind)

    np.testing.assert_array_equal(sim.values, sim.values.T)
    assert sim.values.max() <= 1.0
    assert sim.values.min() >= -1.0


def test_identical_vectors_have_cosine_one(scale):
    table = RatingsTable.from_triples(
        [("a", "x", 2), ("a", "y", 4), ("b", "x", 2), ("b", "y", 4)], scale
    )
    sim = compute_similarity(Trainset.from_table(table), kind="cosine")
    assert sim[0, 1] == pytest.approx(1.0)


@pytest.mark.parametrize("kind", ["cosine", "msd", "pearson", "pearson_baseline"])
def test_disjoint_supports_are_zero(scale, kind):
    table = RatingsTable.from_triples([("a", "x", 2), ("b", "y", 4), ("c", "x", 3)], scale)
    sim = compute_similarity(Trainset.from_table(table), kind=kind)
    assert sim[0, 1] == 0.0


def test_linear_relation_has_pearson_one(scale):
    table = RatingsTable.from_triples(
        [("a", "x", 1), ("a", "y", 2), ("b", "x", 2), ("b", "y", 4)], scale
    )
    sim = compute_similarity(Trainset.from_table(table), kind="pearson")
    assert sim[0, 1] == pytest.approx(1.0)


def test_min_support_zeroes_thin_pairs(small_table):
    train = Trainset.from_table(small_table)
    sim = compute_similarity(train, kind="msd", min_support=8)

    indicator = train.indicator.toarray()
    common = indicator @ indicator.T
    off_diagonal = ~np.eye(train.n_users, dtype=bool)
    assert np.all(sim.values[(common < 8) & off_diagonal] == 0.0)
    assert np.all(sim.values[(common >= 8) & off_diagonal] > 0.0)

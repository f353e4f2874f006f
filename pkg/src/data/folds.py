"""
Deterministic k-fold partitions of a ratings table.
"""

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .ratings import RatingsTable


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Per-rating fold index for a k-fold split."""

    k: int
    seed: int
    assignments: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def splits(self) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
        """Yield (fold, train_indices, test_indices) in fold order."""
        for fold in range(self.k):
            yield fold, self.train_indices(fold), self.test_indices(fold)

    @property
    def fold_sizes(self) -> list[int]:
        return np.bincount(self.assignments, minlength=self.k).tolist()

    def same_as(self, other: "FoldPlan") -> bool:
        return (
            self.k == other.k
            and self.seed == other.seed
            and np.array_equal(self.assignments, other.assignments)
        )


def kfold_split(table: RatingsTable, k: int, seed: int) -> FoldPlan:
    """
    Shuffle rating indices with a seeded generator and deal them into k folds.

    Fold sizes differ by at most one.
    """
    if not 2 <= k <= table.n_ratings:
        raise ValueError(f"k must lie in [2, {table.n_ratings}], got {k}")

    order = np.random.default_rng(seed).permutation(table.n_ratings)
    assignments = np.empty(table.n_ratings, dtype=np.int64)
    assignments[order] = np.arange(table.n_ratings) % k
    assignments.setflags(write=False)
    return FoldPlan(k=k, seed=seed, assignments=assignments)

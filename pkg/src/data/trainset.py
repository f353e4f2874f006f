"""
Training views over a RatingsTable.

A Trainset keeps the full inner-id space of its table, so ids line up with
the held-out ratings; users or items without training ratings are "unknown".
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..models.schemas import RatingScale
from .ratings import RatingsTable


@dataclass(frozen=True, eq=False)
class Trainset:
    """Ratings used to fit a model, plus cached per-entity statistics."""

    users: np.ndarray
    items: np.ndarray
    values: np.ndarray
    n_users: int
    n_items: int
    scale: RatingScale

    @classmethod
    def from_table(cls, table: RatingsTable, indices: Optional[np.ndarray] = None) -> "Trainset":
        if indices is None:
            indices = np.arange(table.n_ratings)
        return cls(
            users=table.users[indices],
            items=table.items[indices],
            values=table.values[indices],
            n_users=table.n_users,
            n_items=table.n_items,
            scale=table.scale,
        )

    @property
    def n_ratings(self) -> int:
        return len(self.values)

    @cached_property
    def global_mean(self) -> float:
        return float(self.values.mean())

    @cached_property
    def user_counts(self) -> np.ndarray:
        return np.bincount(self.users, minlength=self.n_users)

    @cached_property
    def item_counts(self) -> np.ndarray:
        return np.bincount(self.items, minlength=self.n_items)

    def _means(self, index: np.ndarray, counts: np.ndarray) -> np.ndarray:
        sums = np.bincount(index, weights=self.values, minlength=len(counts))
        return np.divide(sums, counts, out=np.full(len(counts), self.global_mean), where=counts > 0)

    def _stds(self, index: np.ndarray, counts: np.ndarray, means: np.ndarray) -> np.ndarray:
        squares = np.bincount(index, weights=(self.values - means[index]) ** 2, minlength=len(counts))
        variance = np.divide(squares, counts, out=np.zeros(len(counts)), where=counts > 0)
        return np.sqrt(variance)

    @cached_property
    def user_means(self) -> np.ndarray:
        return self._means(self.users, self.user_counts)

    @cached_property
    def item_means(self) -> np.ndarray:
        return self._means(self.items, self.item_counts)

    @cached_property
    def user_stds(self) -> np.ndarray:
        return self._stds(self.users, self.user_counts, self.user_means)

    @cached_property
    def item_stds(self) -> np.ndarray:
        return self._stds(self.items, self.item_counts, self.item_means)

    @cached_property
    def matrix(self) -> sp.csr_matrix:
        """users x items rating matrix; explicit zeros are kept."""
        return sp.csr_matrix(
            (self.values, (self.users, self.items)), shape=(self.n_users, self.n_items)
        )

    @cached_property
    def indicator(self) -> sp.csr_matrix:
        """users x items 0/1 matrix of observed pairs."""
        return sp.csr_matrix(
            (np.ones(self.n_ratings), (self.users, self.items)), shape=(self.n_users, self.n_items)
        )

    @cached_property
    def item_major(self) -> sp.csc_matrix:
        return self.matrix.tocsc()

    def knows_user(self, u: int) -> bool:
        return 0 <= u < self.n_users and self.user_counts[u] > 0

    def knows_item(self, i: int) -> bool:
        return 0 <= i < self.n_items and self.item_counts[i] > 0

    def user_ratings(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """(items, values) rated by user u."""
        m = self.matrix
        start, end = m.indptr[u], m.indptr[u + 1]
        return m.indices[start:end], m.data[start:end]

    def item_ratings(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(users, values) who rated item i."""
        m = self.item_major
        start, end = m.indptr[i], m.indptr[i + 1]
        return m.indices[start:end], m.data[start:end]

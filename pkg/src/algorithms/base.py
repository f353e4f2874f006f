"""
Fitted model interface shared by every algorithm.

Subclasses implement ``_estimate`` on inner ids and return raw estimates plus
an "impossible" mask; the wrapper clips to the rating scale and replaces any
non-finite estimate with the training mean.
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from ..data.ratings import RatingsTable
from ..data.trainset import Trainset
from ..models.enums import AlgorithmName
from ..models.schemas import RatingScale


class FittedModel(ABC):
    """A trained rating predictor."""

    name: AlgorithmName

    def __init__(self, train: Trainset):
        self.trainset = train
        self.global_mean: float = train.global_mean
        self.scale: RatingScale = train.scale
        self._table: Optional[RatingsTable] = None

    @abstractmethod
    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Unclipped estimates and impossible flags for inner id arrays."""

    def predict(self, users, items) -> tuple[np.ndarray, np.ndarray]:
        """Clipped estimates and was_impossible flags for inner id arrays."""
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        estimates, impossible = self._estimate(users, items)
        estimates = np.asarray(estimates, dtype=np.float64)
        impossible = np.asarray(impossible, dtype=bool).copy()
        broken = ~np.isfinite(estimates)
        if broken.any():
            estimates = np.where(broken, self.global_mean, estimates)
            impossible |= broken
        return np.clip(estimates, self.scale.min, self.scale.max), impossible

    def score(self, u: int, i: int) -> tuple[float, bool]:
        """Clipped estimate and was_impossible flag for one inner (user, item)."""
        estimates, impossible = self.predict(np.array([u]), np.array([i]))
        return float(estimates[0]), bool(impossible[0])

    def attach_ids(self, table: RatingsTable) -> "FittedModel":
        """Remember the table's id maps so ``predict_raw`` can be used."""
        self._table = table
        return self

    def predict_raw(self, user: object, item: object) -> tuple[float, bool]:
        """Score a pair of raw ids; ids never seen are treated as unknown."""
        if self._table is None:
            raise RuntimeError("predict_raw needs attach_ids(table) first")
        u = self._table.inner_user_id(user) if self._table.has_user(user) else -1
        i = self._table.inner_item_id(item) if self._table.has_item(item) else -1
        return self.score(u, i)

    def known_users(self, users: np.ndarray) -> np.ndarray:
        inside = (users >= 0) & (users < self.trainset.n_users)
        known = np.zeros(len(users), dtype=bool)
        known[inside] = self.trainset.user_counts[users[inside]] > 0
        return known

    def known_items(self, items: np.ndarray) -> np.ndarray:
        inside = (items >= 0) & (items < self.trainset.n_items)
        known = np.zeros(len(items), dtype=bool)
        known[inside] = self.trainset.item_counts[items[inside]] > 0
        return known

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name.value}>"

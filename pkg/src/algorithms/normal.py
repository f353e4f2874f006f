"""
Normal Predictor: random ratings drawn from the fitted rating distribution.
"""

import threading

import numpy as np

from ..data.trainset import Trainset
from ..models.enums import AlgorithmName
from .base import FittedModel


class NormalPredictorModel(FittedModel):
    """Draws each score from Normal(mu, sigma) fitted by maximum likelihood."""

    name = AlgorithmName.NORMAL_PREDICTOR

    def __init__(self, train: Trainset, seed: int):
        super().__init__(train)
        self.mu = float(train.values.mean())
        self.sigma = float(np.sqrt(np.mean((train.values - self.mu) ** 2)))
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        # Sampling advances shared generator state.
        self._lock = threading.Lock()

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        with self._lock:
            draws = self._rng.normal(self.mu, self.sigma, size=len(users))
        return draws, np.zeros(len(users), dtype=bool)

    def fork(self, seed: int) -> "NormalPredictorModel":
        """Same fitted distribution, independent generator."""
        return NormalPredictorModel(self.trainset, seed)


def fit_normal_predictor(train: Trainset, seed: int) -> NormalPredictorModel:
    return NormalPredictorModel(train, seed)

"""
User and item biases around the global mean, and the Baseline Only predictor.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger
from numba import njit

from ..data.trainset import Trainset
from ..errors import FitDivergedError
from ..models.enums import AlgorithmName, BaselineMethod
from .base import FittedModel


@dataclass(frozen=True, eq=False)
class Baselines:
    """mu + b_u + b_i; entities without training ratings keep bias 0."""

    mu: float
    b_u: np.ndarray
    b_i: np.ndarray

    def estimate(self, users: np.ndarray, items: np.ndarray) -> np.ndarray:
        """Baseline estimate for inner id arrays; ids out of range count as unknown."""
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        in_u = (users >= 0) & (users < len(self.b_u))
        in_i = (items >= 0) & (items < len(self.b_i))
        user_part = np.where(in_u, self.b_u[np.where(in_u, users, 0)], 0.0)
        item_part = np.where(in_i, self.b_i[np.where(in_i, items, 0)], 0.0)
        return self.mu + user_part + item_part


@njit(nogil=True, cache=True)
def _sgd_epoch(users, items, values, mu, b_u, b_i, lr, reg):
    for idx in range(len(values)):
        u = users[idx]
        i = items[idx]
        err = values[idx] - (mu + b_u[u] + b_i[i])
        b_u[u] += lr * (err - reg * b_u[u])
        b_i[i] += lr * (err - reg * b_i[i])


def _als_epoch(train: Trainset, mu: float, b_u: np.ndarray, b_i: np.ndarray,
               reg_u: float, reg_i: float) -> None:
    users, items, values = train.users, train.items, train.values
    item_counts, user_counts = train.item_counts, train.user_counts

    residual = np.bincount(items, weights=values - mu - b_u[users], minlength=train.n_items)
    np.divide(residual, reg_i + item_counts, out=b_i, where=item_counts > 0)

    residual = np.bincount(users, weights=values - mu - b_i[items], minlength=train.n_users)
    np.divide(residual, reg_u + user_counts, out=b_u, where=user_counts > 0)


def fit_baselines(
    train: Trainset,
    method: BaselineMethod | str = BaselineMethod.ALS,
    epochs: Optional[int] = None,
    reg_u: float = 15.0,
    reg_i: float = 10.0,
    lr: float = 0.005,
    reg: float = 0.02,
) -> Baselines:
    """
    Estimate user and item biases.

    Args:
        train: Training ratings
        method: ``als`` (alternating closed-form updates) or ``sgd``
        epochs: Rounds; defaults to 10 for ALS and 20 for SGD
        reg_u: ALS user regularization
        reg_i: ALS item regularization
        lr: SGD learning rate
        reg: SGD regularization

    Returns:
        Fitted Baselines
    """
    method = BaselineMethod(method)
    if epochs is None:
        epochs = 10 if method == BaselineMethod.ALS else 20

    mu = train.global_mean
    b_u = np.zeros(train.n_users)
    b_i = np.zeros(train.n_items)

    for epoch in range(1, epochs + 1):
        if method == BaselineMethod.ALS:
            _als_epoch(train, mu, b_u, b_i, reg_u, reg_i)
        else:
            _sgd_epoch(train.users, train.items, train.values, mu, b_u, b_i, lr, reg)
        if not (np.isfinite(b_u).all() and np.isfinite(b_i).all()):
            raise FitDivergedError(f"baselines ({method.value})", epoch)

    logger.debug(f"Baselines ({method.value}) fitted in {epochs} epochs")
    b_u.setflags(write=False)
    b_i.setflags(write=False)
    return Baselines(mu=mu, b_u=b_u, b_i=b_i)


class BaselineOnlyModel(FittedModel):
    """Predicts mu + b_u + b_i."""

    name = AlgorithmName.BASELINE_ONLY

    def __init__(self, train: Trainset, baselines: Baselines):
        super().__init__(train)
        self.baselines = baselines

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.baselines.estimate(users, items), np.zeros(len(users), dtype=bool)


def fit_baseline_only(train: Trainset, **params) -> BaselineOnlyModel:
    return BaselineOnlyModel(train, fit_baselines(train, **params))

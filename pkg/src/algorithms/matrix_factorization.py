"""
Latent factor models: SVD, SVD++ (SGD) and NMF (multiplicative updates).
"""

from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from loguru import logger
from numba import njit

from ..data.trainset import Trainset
from ..errors import FitDivergedError
from ..models.enums import AlgorithmName
from .base import FittedModel

NMF_EPS = 1e-12

EpochCallback = Callable[[int, np.ndarray, np.ndarray], None]


@njit(nogil=True, cache=True)
def _svd_epoch(users, items, values, order, mu, bu, bi, pu, qi, lr, reg):
    n_factors = pu.shape[1]
    for idx in order:
        u = users[idx]
        i = items[idx]
        dot = 0.0
        for f in range(n_factors):
            dot += qi[i, f] * pu[u, f]
        err = values[idx] - (mu + bu[u] + bi[i] + dot)
        bu[u] += lr * (err - reg * bu[u])
        bi[i] += lr * (err - reg * bi[i])
        for f in range(n_factors):
            puf = pu[u, f]
            qif = qi[i, f]
            pu[u, f] += lr * (err * qif - reg * puf)
            qi[i, f] += lr * (err * puf - reg * qif)


@njit(nogil=True, cache=True)
def _svdpp_epoch(users, items, values, order, indptr, indices, mu, bu, bi, pu, qi, yj, lr, reg):
    n_factors = pu.shape[1]
    implicit = np.zeros(n_factors)
    for idx in order:
        u = users[idx]
        i = items[idx]
        start = indptr[u]
        end = indptr[u + 1]
        norm = 1.0 / np.sqrt(end - start)

        implicit[:] = 0.0
        for t in range(start, end):
            j = indices[t]
            for f in range(n_factors):
                implicit[f] += yj[j, f]
        for f in range(n_factors):
            implicit[f] *= norm

        dot = 0.0
        for f in range(n_factors):
            dot += qi[i, f] * (pu[u, f] + implicit[f])
        err = values[idx] - (mu + bu[u] + bi[i] + dot)

        bu[u] += lr * (err - reg * bu[u])
        bi[i] += lr * (err - reg * bi[i])
        for f in range(n_factors):
            puf = pu[u, f]
            qif = qi[i, f]
            pu[u, f] += lr * (err * qif - reg * puf)
            qi[i, f] += lr * (err * (puf + implicit[f]) - reg * qif)
            for t in range(start, end):
                j = indices[t]
                yj[j, f] += lr * (err * norm * qif - reg * yj[j, f])


class SVDModel(FittedModel):
    """Biased factorization, optionally with implicit feedback (SVD++)."""

    def __init__(
        self,
        train: Trainset,
        bu: np.ndarray,
        bi: np.ndarray,
        pu: np.ndarray,
        qi: np.ndarray,
        yj: Optional[np.ndarray],
        loss_history: list[float],
    ):
        super().__init__(train)
        self.name = AlgorithmName.SVD if yj is None else AlgorithmName.SVDPP
        self.bu, self.bi, self.pu, self.qi, self.yj = bu, bi, pu, qi, yj
        self.loss_history = tuple(loss_history)
        self._user_factors = _effective_user_factors(train, pu, yj)
        for array in (bu, bi, pu, qi, self._user_factors):
            array.setflags(write=False)
        if yj is not None:
            yj.setflags(write=False)

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        known_u = self.known_users(users)
        known_i = self.known_items(items)
        estimates = np.full(len(users), self.global_mean)
        estimates[known_u] += self.bu[users[known_u]]
        estimates[known_i] += self.bi[items[known_i]]
        both = known_u & known_i
        estimates[both] += np.einsum(
            "ij,ij->i", self.qi[items[both]], self._user_factors[users[both]]
        )
        return estimates, np.zeros(len(users), dtype=bool)


def _effective_user_factors(train: Trainset, pu: np.ndarray, yj: Optional[np.ndarray]) -> np.ndarray:
    """p_u, plus |N(u)|^-1/2 * sum of y_j over rated items for SVD++."""
    if yj is None:
        return pu.copy()
    counts = train.user_counts.astype(np.float64)
    norms = np.divide(1.0, np.sqrt(counts), out=np.zeros_like(counts), where=counts > 0)
    implicit = sp.diags(norms) @ (train.indicator @ yj)
    return pu + np.asarray(implicit)


def _regularized_loss(
    train: Trainset, mu: float, bu, bi, pu, qi, yj: Optional[np.ndarray], reg: float
) -> float:
    users, items = train.users, train.items
    factors = _effective_user_factors(train, pu, yj)
    predictions = mu + bu[users] + bi[items] + np.einsum("ij,ij->i", qi[items], factors[users])
    squared = np.sum((train.values - predictions) ** 2)
    penalty = (
        bu[users] ** 2 + bi[items] ** 2 + (pu**2).sum(axis=1)[users] + (qi**2).sum(axis=1)[items]
    ).sum()
    if yj is not None:
        penalty += (yj**2).sum()
    return float(squared + reg * penalty)


def fit_svd(
    train: Trainset,
    implicit: bool = False,
    n_factors: int = 100,
    n_epochs: int = 20,
    lr: float = 0.005,
    reg: float = 0.02,
    seed: int = 0,
    init_std: float = 0.1,
) -> SVDModel:
    """
    Fit SVD (``implicit=False``) or SVD++ (``implicit=True``) by SGD.

    Ratings are visited in an order reshuffled every epoch from the seed.
    After each epoch the regularized squared error is recorded in
    ``loss_history``; a non-finite value raises FitDivergedError.

    Args:
        train: Training ratings
        implicit: Add the implicit-feedback term of SVD++
        n_factors: Latent dimension
        n_epochs: Passes over the ratings
        lr: Learning rate shared by all parameters
        reg: Regularization shared by all parameters
        seed: Seed for factor initialization and visiting order
        init_std: Standard deviation of the factor initialization

    Returns:
        Fitted SVDModel
    """
    name = AlgorithmName.SVDPP if implicit else AlgorithmName.SVD
    rng = np.random.default_rng(seed)
    mu = train.global_mean
    bu = np.zeros(train.n_users)
    bi = np.zeros(train.n_items)
    pu = rng.normal(0.0, init_std, (train.n_users, n_factors))
    qi = rng.normal(0.0, init_std, (train.n_items, n_factors))
    yj = rng.normal(0.0, init_std, (train.n_items, n_factors)) if implicit else None

    indicator = train.indicator
    history: list[float] = []
    for epoch in range(1, n_epochs + 1):
        order = rng.permutation(train.n_ratings)
        with np.errstate(over="ignore", invalid="ignore"):
            if implicit:
                _svdpp_epoch(
                    train.users, train.items, train.values, order,
                    indicator.indptr, indicator.indices,
                    mu, bu, bi, pu, qi, yj, lr, reg,
                )
            else:
                _svd_epoch(train.users, train.items, train.values, order, mu, bu, bi, pu, qi, lr, reg)
            loss = _regularized_loss(train, mu, bu, bi, pu, qi, yj, reg)
        if not np.isfinite(loss):
            raise FitDivergedError(name.value, epoch)
        history.append(loss)
        logger.debug(f"{name.value} epoch {epoch}/{n_epochs}: loss={loss:.4f}")

    return SVDModel(train, bu, bi, pu, qi, yj, history)


class NMFModel(FittedModel):
    """Unbiased non-negative factorization r = q_i . p_u."""

    name = AlgorithmName.NMF

    def __init__(self, train: Trainset, pu: np.ndarray, qi: np.ndarray, offset: float):
        super().__init__(train)
        self.pu, self.qi = pu, qi
        self.offset = offset
        pu.setflags(write=False)
        qi.setflags(write=False)

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        both = self.known_users(users) & self.known_items(items)
        estimates = np.full(len(users), self.global_mean)
        estimates[both] = self.offset + np.einsum(
            "ij,ij->i", self.qi[items[both]], self.pu[users[both]]
        )
        return estimates, ~both


def fit_nmf(
    train: Trainset,
    n_factors: int = 15,
    n_epochs: int = 50,
    reg_pu: float = 0.06,
    reg_qi: float = 0.06,
    seed: int = 0,
    init_low: float = 0.0,
    init_high: float = 1.0,
    epoch_callback: Optional[EpochCallback] = None,
) -> NMFModel:
    """
    Fit NMF with regularized multiplicative updates.

    Factors start uniform in (init_low, init_high] with 0 excluded, since a
    multiplicative update never leaves an exact zero. Both factor matrices are
    updated from the previous epoch's values. On scales reaching below zero the
    ratings are shifted so the smallest rating is 0; predictions shift back.

    Args:
        train: Training ratings
        n_factors: Latent dimension
        n_epochs: Update rounds
        reg_pu: User factor regularization
        reg_qi: Item factor regularization
        seed: Seed for the initialization
        init_low: Lower initialization bound (exclusive)
        init_high: Upper initialization bound
        epoch_callback: Called as ``callback(epoch, pu, qi)`` after each epoch

    Returns:
        Fitted NMFModel
    """
    rng = np.random.default_rng(seed)
    offset = min(train.scale.min, 0.0)
    users, items = train.users, train.items
    values = train.values - offset
    low = np.nextafter(max(init_low, 0.0), np.inf)
    pu = rng.uniform(low, init_high, (train.n_users, n_factors))
    qi = rng.uniform(low, init_high, (train.n_items, n_factors))

    shape = (train.n_users, train.n_items)
    ratings = sp.csr_matrix((values, (users, items)), shape=shape)
    user_counts = train.user_counts[:, None].astype(np.float64)
    item_counts = train.item_counts[:, None].astype(np.float64)

    for epoch in range(1, n_epochs + 1):
        estimates = np.einsum("ij,ij->i", qi[items], pu[users])
        predicted = sp.csr_matrix((estimates, (users, items)), shape=shape)

        user_num = ratings @ qi
        user_den = predicted @ qi + reg_pu * user_counts * pu
        item_num = ratings.T @ pu
        item_den = predicted.T @ pu + reg_qi * item_counts * qi

        pu = pu * user_num / np.maximum(user_den, NMF_EPS)
        qi = qi * item_num / np.maximum(item_den, NMF_EPS)

        if not (np.isfinite(pu).all() and np.isfinite(qi).all()):
            raise FitDivergedError(AlgorithmName.NMF.value, epoch)
        if epoch_callback is not None:
            epoch_callback(epoch, pu, qi)

    logger.debug(f"NMF fitted: {n_factors} factors, {n_epochs} epochs")
    return NMFModel(train, pu, qi, offset)

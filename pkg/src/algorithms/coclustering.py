"""
Co-clustering: users and items are clustered jointly and a rating is
predicted from co-cluster, user-cluster and item-cluster averages.
"""

from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..data.trainset import Trainset
from ..models.enums import AlgorithmName
from .base import FittedModel


@dataclass(frozen=True, eq=False)
class _ClusterAverages:
    cocluster: np.ndarray
    user_cluster: np.ndarray
    item_cluster: np.ndarray


class CoClusteringModel(FittedModel):
    name = AlgorithmName.CO_CLUSTERING

    def __init__(
        self,
        train: Trainset,
        user_clusters: np.ndarray,
        item_clusters: np.ndarray,
        averages: _ClusterAverages,
        objective_history: list[float],
    ):
        super().__init__(train)
        self.user_clusters = user_clusters
        self.item_clusters = item_clusters
        self.averages = averages
        self.objective_history = tuple(objective_history)

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        known_u = self.known_users(users)
        known_i = self.known_items(items)
        train = self.trainset
        estimates = np.full(len(users), self.global_mean)

        only_u = known_u & ~known_i
        only_i = known_i & ~known_u
        both = known_u & known_i
        estimates[only_u] = train.user_means[users[only_u]]
        estimates[only_i] = train.item_means[items[only_i]]
        estimates[both] = _predict(
            users[both], items[both], self.user_clusters, self.item_clusters, self.averages, train
        )
        return estimates, ~(known_u | known_i)


def _cluster_means(keys: np.ndarray, values: np.ndarray, n: int, fallback: float) -> np.ndarray:
    sums = np.bincount(keys, weights=values, minlength=n)
    counts = np.bincount(keys, minlength=n)
    return np.divide(sums, counts, out=np.full(n, fallback), where=counts > 0)


def _averages(
    train: Trainset, cu: np.ndarray, ci: np.ndarray, n_cu: int, n_ci: int
) -> _ClusterAverages:
    mu = train.global_mean
    u_of, i_of = cu[train.users], ci[train.items]
    cocluster = _cluster_means(u_of * n_ci + i_of, train.values, n_cu * n_ci, mu)
    return _ClusterAverages(
        cocluster=cocluster.reshape(n_cu, n_ci),
        user_cluster=_cluster_means(u_of, train.values, n_cu, mu),
        item_cluster=_cluster_means(i_of, train.values, n_ci, mu),
    )


def _predict(users, items, cu, ci, avg: _ClusterAverages, train: Trainset) -> np.ndarray:
    c_u, c_i = cu[users], ci[items]
    return (
        avg.cocluster[c_u, c_i]
        + train.user_means[users] - avg.user_cluster[c_u]
        + train.item_means[items] - avg.item_cluster[c_i]
    )


def _objective(train: Trainset, cu, ci, avg: _ClusterAverages) -> float:
    residual = train.values - _predict(train.users, train.items, cu, ci, avg, train)
    return float(np.sum(residual**2))


def _reseed_empty(assigned: np.ndarray, costs: np.ndarray, known: np.ndarray) -> np.ndarray:
    """Move the worst-fitting entity of a multi-member cluster into each empty cluster."""
    n_clusters = costs.shape[1]
    assigned = assigned.copy()
    for cluster in range(n_clusters):
        sizes = np.bincount(assigned[known], minlength=n_clusters)
        if sizes[cluster] > 0:
            continue
        movable = known & (sizes[assigned] > 1)
        if not movable.any():
            break
        own_cost = np.where(movable, costs[np.arange(len(assigned)), assigned], -np.inf)
        assigned[int(np.argmax(own_cost))] = cluster
    return assigned


def _assign(
    keys: np.ndarray, residual_by_cluster: np.ndarray, n_entities: int, known: np.ndarray,
    current: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    costs = np.stack(
        [
            np.bincount(keys, weights=residual_by_cluster[c] ** 2, minlength=n_entities)
            for c in range(residual_by_cluster.shape[0])
        ],
        axis=1,
    )
    assigned = np.where(known, np.argmin(costs, axis=1), current)
    return assigned, costs


def fit_coclustering(
    train: Trainset,
    n_cltr_u: int = 3,
    n_cltr_i: int = 3,
    n_epochs: int = 20,
    seed: int = 0,
) -> CoClusteringModel:
    """
    Fit co-clustering by alternating user and item reassignment.

    Each epoch reassigns users, then items, to the cluster minimizing their
    squared reconstruction error under the current averages. An epoch that
    would raise the training objective is rolled back and training stops.

    Args:
        train: Training ratings
        n_cltr_u: Number of user clusters
        n_cltr_i: Number of item clusters
        n_epochs: Maximum reassignment rounds
        seed: Seed for the initial random assignment

    Returns:
        Fitted CoClusteringModel
    """
    rng = np.random.default_rng(seed)
    users, items, values = train.users, train.items, train.values
    known_u = train.user_counts > 0
    known_i = train.item_counts > 0
    cu = rng.integers(0, n_cltr_u, train.n_users)
    ci = rng.integers(0, n_cltr_i, train.n_items)

    avg = _averages(train, cu, ci, n_cltr_u, n_cltr_i)
    history = [_objective(train, cu, ci, avg)]
    user_dev = train.user_means[users]
    item_dev = train.item_means[items]

    for epoch in range(1, n_epochs + 1):
        residual_u = np.stack([
            values - (avg.cocluster[c, ci[items]] + user_dev - avg.user_cluster[c]
                      + item_dev - avg.item_cluster[ci[items]])
            for c in range(n_cltr_u)
        ])
        new_cu, costs_u = _assign(users, residual_u, train.n_users, known_u, cu)
        new_cu = _reseed_empty(new_cu, costs_u, known_u)

        residual_i = np.stack([
            values - (avg.cocluster[new_cu[users], c] + user_dev - avg.user_cluster[new_cu[users]]
                      + item_dev - avg.item_cluster[c])
            for c in range(n_cltr_i)
        ])
        new_ci, costs_i = _assign(items, residual_i, train.n_items, known_i, ci)
        new_ci = _reseed_empty(new_ci, costs_i, known_i)

        new_avg = _averages(train, new_cu, new_ci, n_cltr_u, n_cltr_i)
        objective = _objective(train, new_cu, new_ci, new_avg)
        if objective > history[-1]:
            logger.debug(f"CoClustering stopped at epoch {epoch}: objective would rise")
            break
        cu, ci, avg = new_cu, new_ci, new_avg
        history.append(objective)

    logger.debug(f"CoClustering fitted: objective {history[0]:.4f} -> {history[-1]:.4f}")
    for array in (cu, ci):
        array.setflags(write=False)
    return CoClusteringModel(train, cu, ci, avg, history)

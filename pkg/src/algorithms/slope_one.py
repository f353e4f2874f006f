"""
Slope One: mean pairwise item deviations added to the user's mean.
"""

import numpy as np
import scipy.sparse as sp
from loguru import logger

from ..data.trainset import Trainset
from ..models.enums import AlgorithmName
from .base import FittedModel


def _row_values(matrix: sp.csr_matrix, row: int, cols: np.ndarray) -> np.ndarray:
    """matrix[row, cols] for a csr matrix with sorted indices; absent entries are 0."""
    start, end = matrix.indptr[row], matrix.indptr[row + 1]
    indices = matrix.indices[start:end]
    if len(indices) == 0:
        return np.zeros(len(cols))
    positions = np.minimum(np.searchsorted(indices, cols), len(indices) - 1)
    hit = indices[positions] == cols
    return np.where(hit, matrix.data[start:end][positions], 0.0)


class SlopeOneModel(FittedModel):
    name = AlgorithmName.SLOPE_ONE

    def __init__(self, train: Trainset, freq: sp.csr_matrix, dev: sp.csr_matrix):
        super().__init__(train)
        self.freq = freq
        self.dev = dev

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        known_u = self.known_users(users)
        known_i = self.known_items(items)
        estimates = np.full(len(users), self.global_mean)
        impossible = np.ones(len(users), dtype=bool)
        for n in np.flatnonzero(known_u):
            u, i = int(users[n]), int(items[n])
            user_mean = float(self.trainset.user_means[u])
            estimates[n] = user_mean
            if not known_i[n]:
                continue
            rated, _ = self.trainset.user_ratings(u)
            relevant = rated[_row_values(self.freq, i, rated) > 0]
            if len(relevant) == 0:
                continue
            estimates[n] = user_mean + _row_values(self.dev, i, relevant).mean()
            impossible[n] = False
        return estimates, impossible


def fit_slope_one(train: Trainset) -> SlopeOneModel:
    """
    Build the co-rating counts and mean deviations of every item pair.

    ``dev[i, j]`` is the mean of ``r_ui - r_uj`` over users who rated both.
    """
    ratings = train.matrix
    indicator = train.indicator

    freq = (indicator.T @ indicator).tocsr()
    sums = (ratings.T @ indicator - indicator.T @ ratings).tocsr()
    inverse = freq.copy()
    inverse.data = 1.0 / inverse.data
    dev = sums.multiply(inverse).tocsr()

    freq.sort_indices()
    dev.sort_indices()
    logger.debug(f"Slope One fitted: {freq.nnz} co-rated item pairs")
    return SlopeOneModel(train, freq, dev)

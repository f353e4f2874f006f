"""
Pairwise similarity kernels over users or items.

All kernels are computed from sparse products over the common support of each
pair, so a full matrix costs a handful of sparse matmuls instead of a Python
loop over pairs.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from loguru import logger

from ..data.trainset import Trainset
from ..models.enums import SimilarityKind
from .baselines import Baselines, fit_baselines


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Dense symmetric similarities; rows and columns are inner ids."""

    kind: SimilarityKind
    values: np.ndarray
    user_based: bool
    min_support: int
    shrinkage: float

    def __getitem__(self, key):
        return self.values[key]

    @property
    def size(self) -> int:
        return self.values.shape[0]


def _orient(train: Trainset, user_based: bool, values: np.ndarray) -> sp.csr_matrix:
    rows, cols = (train.users, train.items) if user_based else (train.items, train.users)
    shape = (train.n_users, train.n_items) if user_based else (train.n_items, train.n_users)
    return sp.csr_matrix((values, (rows, cols)), shape=shape)


def compute_similarity(
    train: Trainset,
    kind: SimilarityKind | str = SimilarityKind.MSD,
    user_based: bool = True,
    min_support: int = 1,
    shrinkage: float = 100.0,
    baselines: Optional[Baselines] = None,
) -> SimilarityMatrix:
    """
    Build the similarity matrix of one kernel.

    Args:
        train: Training ratings
        kind: cosine, msd, pearson or pearson_baseline
        user_based: Compare users (True) or items (False)
        min_support: Pairs with fewer common ratings get similarity 0
        shrinkage: pearson_baseline shrinkage towards 0
        baselines: Biases for pearson_baseline; fitted with ALS defaults if missing

    Returns:
        SimilarityMatrix with undefined entries set to 0
    """
    kind = SimilarityKind(kind)
    ratings = train.values
    if kind == SimilarityKind.PEARSON_BASELINE:
        if baselines is None:
            baselines = fit_baselines(train)
        ratings = train.values - baselines.estimate(train.users, train.items)

    x = _orient(train, user_based, ratings)
    m = _orient(train, user_based, np.ones(train.n_ratings))

    freq = (m @ m.T).toarray()
    prods = (x @ x.T).toarray()
    # squares[a, b] = sum over the common support of x_a^2
    squares = (x.multiply(x) @ m.T).toarray()

    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == SimilarityKind.COSINE:
            sim = prods / np.sqrt(squares * squares.T)
            low = 0.0
        elif kind == SimilarityKind.MSD:
            sq_diff = np.maximum(squares + squares.T - 2.0 * prods, 0.0)
            sim = 1.0 / (sq_diff / freq + 1.0)
            low = 0.0
        elif kind == SimilarityKind.PEARSON:
            sums = (x @ m.T).toarray()
            numerator = prods - sums * sums.T / freq
            var_a = np.maximum(squares - sums**2 / freq, 0.0)
            var_b = np.maximum(squares.T - sums.T**2 / freq, 0.0)
            sim = numerator / np.sqrt(var_a * var_b)
            low = -1.0
        else:
            support = freq - 1.0
            sim = prods / np.sqrt(squares * squares.T) * (support / (support + shrinkage))
            low = -1.0

    sim[~np.isfinite(sim)] = 0.0
    sim[(freq < min_support) | (freq == 0)] = 0.0
    np.clip(sim, low, 1.0, out=sim)

    upper = np.triu(sim, k=1)
    sim = upper + upper.T
    rated = np.asarray(m.sum(axis=1)).ravel() > 0
    np.fill_diagonal(sim, np.where(rated, 1.0, 0.0))
    sim.setflags(write=False)

    logger.debug(
        f"Similarity {kind.value} over {'users' if user_based else 'items'}: "
        f"{sim.shape[0]}x{sim.shape[1]}"
    )
    return SimilarityMatrix(
        kind=kind,
        values=sim,
        user_based=user_based,
        min_support=min_support,
        shrinkage=shrinkage,
    )

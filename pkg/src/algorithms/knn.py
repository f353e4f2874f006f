"""
Neighborhood predictors: KNNBasic, KNNWithMeans, KNNWithZScore, KNNBaseline.

With ``user_based=False`` the roles of users and items swap and the same
formulas apply.
"""

from typing import Optional

import numpy as np
from loguru import logger

from ..data.trainset import Trainset
from ..models.enums import AlgorithmName, KnnVariant, SimilarityKind
from .base import FittedModel
from .baselines import Baselines, fit_baselines
from .similarity import SimilarityMatrix, compute_similarity

_NAMES = {
    KnnVariant.BASIC: AlgorithmName.KNN_BASIC,
    KnnVariant.WITH_MEANS: AlgorithmName.KNN_WITH_MEANS,
    KnnVariant.WITH_ZSCORE: AlgorithmName.KNN_WITH_ZSCORE,
    KnnVariant.BASELINE: AlgorithmName.KNN_BASELINE,
}


class KNNModel(FittedModel):
    """Top-k weighted aggregation over positively similar neighbors."""

    def __init__(
        self,
        train: Trainset,
        variant: KnnVariant,
        similarity: SimilarityMatrix,
        k: int,
        min_k: int,
        baselines: Optional[Baselines] = None,
    ):
        super().__init__(train)
        self.name = _NAMES[variant]
        self.variant = variant
        self.similarity = similarity
        self.k = k
        self.min_k = min_k
        self.baselines = baselines
        self.user_based = similarity.user_based
        if self.user_based:
            self._means, self._stds = train.user_means, train.user_stds
        else:
            self._means, self._stds = train.item_means, train.item_stds

    def _fallback(self, u: int, i: int, x_known: bool) -> float:
        if self.variant == KnnVariant.BASIC:
            return self.global_mean
        if self.variant == KnnVariant.BASELINE:
            return float(self.baselines.estimate(np.array([u]), np.array([i]))[0])
        return float(self._means[u if self.user_based else i]) if x_known else self.global_mean

    def neighbors(self, u: int, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Selected neighbors for the pair.

        Returns:
            (neighbor ids, their ratings of the target, similarities), best first
        """
        if self.user_based:
            x, candidates, ratings = u, *self.trainset.item_ratings(i)
        else:
            x, candidates, ratings = i, *self.trainset.user_ratings(u)
        sims = self.similarity.values[x, candidates]
        usable = (sims > 0) & (candidates != x)
        candidates, ratings, sims = candidates[usable], ratings[usable], sims[usable]
        order = np.argsort(-sims, kind="stable")[: self.k]
        return candidates[order], ratings[order], sims[order]

    def _estimate_one(self, u: int, i: int, u_known: bool, i_known: bool) -> tuple[float, bool]:
        x_known = u_known if self.user_based else i_known
        if not (u_known and i_known):
            if not (u_known or i_known):
                return self.global_mean, True
            return self._fallback(u, i, x_known), True

        nbrs, ratings, sims = self.neighbors(u, i)
        if len(nbrs) < self.min_k or len(nbrs) == 0:
            return self._fallback(u, i, x_known), True

        total = sims.sum()
        if self.variant == KnnVariant.BASIC:
            return float(sims @ ratings / total), False

        if self.variant == KnnVariant.BASELINE:
            if self.user_based:
                nb_base = self.baselines.estimate(nbrs, np.full(len(nbrs), i))
            else:
                nb_base = self.baselines.estimate(np.full(len(nbrs), u), nbrs)
            own = self.baselines.estimate(np.array([u]), np.array([i]))[0]
            return float(own + sims @ (ratings - nb_base) / total), False

        x = u if self.user_based else i
        deviations = ratings - self._means[nbrs]
        if self.variant == KnnVariant.WITH_MEANS:
            return float(self._means[x] + sims @ deviations / total), False

        nb_stds = self._stds[nbrs]
        nb_stds = np.where(nb_stds == 0, 1.0, nb_stds)
        return float(self._means[x] + self._stds[x] * (sims @ (deviations / nb_stds)) / total), False

    def _estimate(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        known_u = self.known_users(users)
        known_i = self.known_items(items)
        estimates = np.empty(len(users))
        impossible = np.zeros(len(users), dtype=bool)
        for n, (u, i) in enumerate(zip(users, items)):
            estimates[n], impossible[n] = self._estimate_one(
                int(u), int(i), bool(known_u[n]), bool(known_i[n])
            )
        return estimates, impossible


def fit_knn(
    train: Trainset,
    variant: KnnVariant | str = KnnVariant.BASIC,
    k: int = 40,
    min_k: int = 1,
    sim: SimilarityKind | str = SimilarityKind.MSD,
    user_based: bool = True,
    shrinkage: float = 100.0,
    min_support: int = 1,
    baseline_params: Optional[dict] = None,
) -> KNNModel:
    """
    Fit a neighborhood model.

    Args:
        train: Training ratings
        variant: Aggregation rule
        k: Maximum neighbors used per prediction
        min_k: Fewer usable neighbors than this falls back and flags the pair
        sim: Similarity kernel
        user_based: Neighbors are users (True) or items (False)
        shrinkage: pearson_baseline shrinkage
        min_support: Minimum common ratings for a non-zero similarity
        baseline_params: fit_baselines arguments for the Baseline variant and
            the pearson_baseline kernel

    Returns:
        Fitted KNNModel
    """
    variant = KnnVariant(variant)
    sim = SimilarityKind(sim)
    baselines = None
    if variant == KnnVariant.BASELINE or sim == SimilarityKind.PEARSON_BASELINE:
        baselines = fit_baselines(train, **(baseline_params or {}))
    similarity = compute_similarity(
        train,
        kind=sim,
        user_based=user_based,
        min_support=min_support,
        shrinkage=shrinkage,
        baselines=baselines,
    )
    logger.debug(f"KNN {variant.value} fitted: k={k}, min_k={min_k}, sim={sim.value}")
    return KNNModel(train, variant, similarity, k=k, min_k=min_k, baselines=baselines)

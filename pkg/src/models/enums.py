"""
Enums for RecTune data types.
"""

from enum import Enum


class Metric(str, Enum):
    """Target metrics a selection run can minimize."""

    RMSE = "rmse"
    MAE = "mae"


class AlgorithmName(str, Enum):
    """The eleven rating predictors RecTune can select from."""

    NORMAL_PREDICTOR = "NormalPredictor"
    BASELINE_ONLY = "BaselineOnly"
    KNN_BASIC = "KNNBasic"
    KNN_WITH_MEANS = "KNNWithMeans"
    KNN_WITH_ZSCORE = "KNNWithZScore"
    KNN_BASELINE = "KNNBaseline"
    SVD = "SVD"
    SVDPP = "SVDpp"
    NMF = "NMF"
    SLOPE_ONE = "SlopeOne"
    CO_CLUSTERING = "CoClustering"

    @property
    def slug(self) -> str:
        """Command-line spelling, e.g. ``knn-baseline``."""
        return _SLUGS[self]

    @classmethod
    def parse(cls, text: str) -> "AlgorithmName":
        """Accept either the canonical name or the command-line slug."""
        cleaned = text.strip()
        for member in cls:
            if cleaned in (member.value, member.slug) or cleaned.lower() == member.value.lower():
                return member
        raise ValueError(
            f"Unknown algorithm '{text}'. Valid names: {', '.join(m.slug for m in cls)}"
        )


_SLUGS = {
    AlgorithmName.NORMAL_PREDICTOR: "normal-predictor",
    AlgorithmName.BASELINE_ONLY: "baseline-only",
    AlgorithmName.KNN_BASIC: "knn-basic",
    AlgorithmName.KNN_WITH_MEANS: "knn-with-means",
    AlgorithmName.KNN_WITH_ZSCORE: "knn-with-zscore",
    AlgorithmName.KNN_BASELINE: "knn-baseline",
    AlgorithmName.SVD: "svd",
    AlgorithmName.SVDPP: "svdpp",
    AlgorithmName.NMF: "nmf",
    AlgorithmName.SLOPE_ONE: "slope-one",
    AlgorithmName.CO_CLUSTERING: "co-clustering",
}


class Strategy(str, Enum):
    """Search strategies available to the selection loop."""

    TPE = "tpe"
    RANDOM = "random"


class TrialStatus(str, Enum):
    """Outcome of a single evaluated assignment."""

    OK = "ok"
    FAILED = "failed"


class OutcomeStatus(str, Enum):
    """Why an algorithm's optimization worker stopped."""

    COMPLETED = "completed"
    PRUNED = "pruned"
    TIMED_OUT = "timed_out"
    FAILED = "failed"


class SimilarityKind(str, Enum):
    """Similarity kernels shared by the neighborhood algorithms."""

    COSINE = "cosine"
    MSD = "msd"
    PEARSON = "pearson"
    PEARSON_BASELINE = "pearson_baseline"


class KnnVariant(str, Enum):
    """Aggregation rule of a neighborhood predictor."""

    BASIC = "basic"
    WITH_MEANS = "with_means"
    WITH_ZSCORE = "with_zscore"
    BASELINE = "baseline"


class BaselineMethod(str, Enum):
    """Estimation procedure for user and item biases."""

    ALS = "als"
    SGD = "sgd"

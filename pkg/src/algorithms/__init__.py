"""Rating prediction algorithms."""

from .base import FittedModel
from .baselines import Baselines, BaselineOnlyModel, fit_baselines, fit_baseline_only
from .coclustering import CoClusteringModel, fit_coclustering
from .knn import KNNModel, fit_knn
from .matrix_factorization import NMFModel, SVDModel, fit_nmf, fit_svd
from .normal import NormalPredictorModel, fit_normal_predictor
from .registry import ALGORITHMS, AlgorithmSpec, build_model, get_algorithm
from .similarity import SimilarityMatrix, compute_similarity
from .slope_one import SlopeOneModel, fit_slope_one

__all__ = [
    "FittedModel",
    "Baselines",
    "BaselineOnlyModel",
    "fit_baselines",
    "fit_baseline_only",
    "CoClusteringModel",
    "fit_coclustering",
    "KNNModel",
    "fit_knn",
    "NMFModel",
    "SVDModel",
    "fit_nmf",
    "fit_svd",
    "NormalPredictorModel",
    "fit_normal_predictor",
    "ALGORITHMS",
    "AlgorithmSpec",
    "build_model",
    "get_algorithm",
    "SimilarityMatrix",
    "compute_similarity",
    "SlopeOneModel",
    "fit_slope_one",
]

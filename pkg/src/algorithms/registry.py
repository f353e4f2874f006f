"""
The algorithm roster: default hyperparameters and fit dispatch per name.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Mapping

from ..data.ratings import RatingsTable
from ..data.trainset import Trainset
from ..errors import InvalidAssignmentError
from ..models.enums import AlgorithmName, KnnVariant
from ..models.schemas import ParamAssignment
from .base import FittedModel
from .baselines import fit_baseline_only
from .coclustering import fit_coclustering
from .knn import fit_knn
from .matrix_factorization import fit_nmf, fit_svd
from .normal import fit_normal_predictor
from .slope_one import fit_slope_one

FitFunction = Callable[[Trainset, dict[str, Any], int], FittedModel]


@dataclass(frozen=True)
class AlgorithmSpec:
    """One of the eleven algorithms: its defaults and how to fit it."""

    name: AlgorithmName
    defaults: Mapping[str, Any]
    fit_function: FitFunction = field(repr=False)

    def resolve(self, assignment: ParamAssignment) -> dict[str, Any]:
        """Defaults overlaid with ``assignment``; unknown names are rejected."""
        unknown = sorted(set(assignment) - set(self.defaults))
        if unknown:
            raise InvalidAssignmentError(
                f"{self.name.value} has no parameter(s) {', '.join(unknown)}; "
                f"known: {', '.join(sorted(self.defaults)) or 'none'}"
            )
        return {**self.defaults, **assignment}

    def fit(self, train: Trainset, assignment: ParamAssignment, seed: int) -> FittedModel:
        return self.fit_function(train, self.resolve(assignment), seed)


def _knn(variant: KnnVariant) -> FitFunction:
    def fit(train: Trainset, p: dict[str, Any], seed: int) -> FittedModel:
        return fit_knn(
            train,
            variant,
            k=int(p["k"]),
            min_k=int(p["min_k"]),
            sim=p["sim"],
            user_based=bool(p["user_based"]),
            shrinkage=float(p["shrinkage"]),
            min_support=int(p["min_support"]),
        )

    return fit


def _svd(implicit: bool) -> FitFunction:
    def fit(train: Trainset, p: dict[str, Any], seed: int) -> FittedModel:
        return fit_svd(
            train,
            implicit=implicit,
            n_factors=int(p["n_factors"]),
            n_epochs=int(p["n_epochs"]),
            lr=float(p["lr"]),
            reg=float(p["reg"]),
            seed=seed,
        )

    return fit


def _baseline_only(train: Trainset, p: dict[str, Any], seed: int) -> FittedModel:
    return fit_baseline_only(
        train,
        method=p["method"],
        epochs=None if p.get("epochs") is None else int(p["epochs"]),
        reg_u=float(p["reg_u"]),
        reg_i=float(p["reg_i"]),
        lr=float(p["lr"]),
        reg=float(p["reg"]),
    )


def _nmf(train: Trainset, p: dict[str, Any], seed: int) -> FittedModel:
    return fit_nmf(
        train,
        n_factors=int(p["n_factors"]),
        n_epochs=int(p["n_epochs"]),
        reg_pu=float(p["reg_pu"]),
        reg_qi=float(p["reg_qi"]),
        seed=seed,
    )


def _coclustering(train: Trainset, p: dict[str, Any], seed: int) -> FittedModel:
    return fit_coclustering(
        train,
        n_cltr_u=int(p["n_cltr_u"]),
        n_cltr_i=int(p["n_cltr_i"]),
        n_epochs=int(p["n_epochs"]),
        seed=seed,
    )


_KNN_DEFAULTS = {
    "k": 40,
    "min_k": 1,
    "sim": "msd",
    "user_based": True,
    "shrinkage": 100.0,
    "min_support": 1,
}


def _spec(name: AlgorithmName, defaults: dict[str, Any], fit: FitFunction) -> AlgorithmSpec:
    return AlgorithmSpec(name=name, defaults=MappingProxyType(defaults), fit_function=fit)


ALGORITHMS: dict[AlgorithmName, AlgorithmSpec] = {
    spec.name: spec
    for spec in (
        _spec(
            AlgorithmName.NORMAL_PREDICTOR,
            {},
            lambda train, p, seed: fit_normal_predictor(train, seed),
        ),
        _spec(
            AlgorithmName.BASELINE_ONLY,
            {"method": "als", "epochs": None, "reg_u": 15.0, "reg_i": 10.0, "lr": 0.005, "reg": 0.02},
            _baseline_only,
        ),
        _spec(AlgorithmName.KNN_BASIC, dict(_KNN_DEFAULTS), _knn(KnnVariant.BASIC)),
        _spec(AlgorithmName.KNN_WITH_MEANS, dict(_KNN_DEFAULTS), _knn(KnnVariant.WITH_MEANS)),
        _spec(AlgorithmName.KNN_WITH_ZSCORE, dict(_KNN_DEFAULTS), _knn(KnnVariant.WITH_ZSCORE)),
        _spec(AlgorithmName.KNN_BASELINE, dict(_KNN_DEFAULTS), _knn(KnnVariant.BASELINE)),
        _spec(
            AlgorithmName.SVD,
            {"n_factors": 100, "n_epochs": 20, "lr": 0.005, "reg": 0.02},
            _svd(implicit=False),
        ),
        _spec(
            AlgorithmName.SVDPP,
            {"n_factors": 20, "n_epochs": 20, "lr": 0.007, "reg": 0.02},
            _svd(implicit=True),
        ),
        _spec(
            AlgorithmName.NMF,
            {"n_factors": 15, "n_epochs": 50, "reg_pu": 0.06, "reg_qi": 0.06},
            _nmf,
        ),
        _spec(AlgorithmName.SLOPE_ONE, {}, lambda train, p, seed: fit_slope_one(train)),
        _spec(
            AlgorithmName.CO_CLUSTERING,
            {"n_cltr_u": 3, "n_cltr_i": 3, "n_epochs": 20},
            _coclustering,
        ),
    )
}


def get_algorithm(name: AlgorithmName | str) -> AlgorithmSpec:
    """Look an algorithm up by enum, canonical name or command-line slug."""
    if not isinstance(name, AlgorithmName):
        name = AlgorithmName.parse(name)
    return ALGORITHMS[name]


def build_model(
    name: AlgorithmName | str, params: ParamAssignment, table: RatingsTable, seed: int
) -> FittedModel:
    """Fit an algorithm on the whole table, ready for ``predict_raw``."""
    spec = get_algorithm(name)
    return spec.fit(Trainset.from_table(table), params, seed).attach_ids(table)

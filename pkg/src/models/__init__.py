"""Data models package."""

from .schemas import (
    ParamAssignment,
    RatingScale,
    FormatSpec,
    TpeConfig,
    EvalResult,
    Trial,
    SelectionConfig,
    AlgorithmOutcome,
    Winner,
    SelectionReport,
    DatasetDigest,
    AutoManifest,
    EvaluateManifest,
    GridManifest,
    BenchmarkManifest,
)
from .enums import (
    Metric,
    AlgorithmName,
    Strategy,
    TrialStatus,
    OutcomeStatus,
    SimilarityKind,
    KnnVariant,
    BaselineMethod,
)

__all__ = [
    "ParamAssignment",
    "RatingScale",
    "FormatSpec",
    "TpeConfig",
    "EvalResult",
    "Trial",
    "SelectionConfig",
    "AlgorithmOutcome",
    "Winner",
    "SelectionReport",
    "DatasetDigest",
    "AutoManifest",
    "EvaluateManifest",
    "GridManifest",
    "BenchmarkManifest",
    "Metric",
    "AlgorithmName",
    "Strategy",
    "TrialStatus",
    "OutcomeStatus",
    "SimilarityKind",
    "KnnVariant",
    "BaselineMethod",
]

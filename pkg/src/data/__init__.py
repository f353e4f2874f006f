"""Rating data: loading, training views and cross-validation folds."""

from .ratings import PRESETS, RatingsTable, load_ratings
from .folds import FoldPlan, kfold_split
from .trainset import Trainset

__all__ = [
    "PRESETS",
    "RatingsTable",
    "load_ratings",
    "FoldPlan",
    "kfold_split",
    "Trainset",
]

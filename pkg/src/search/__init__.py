"""Hyperparameter spaces and search strategies."""

from .grid import DEFAULT_GRIDS, grid_points, grid_search, validate_grid
from .parzen import CategoricalParzen, ContinuousParzen, build_parzen
from .random_search import Suggester, create_suggester, random_suggest
from .space import (
    Choice,
    ChoiceOption,
    IntUniform,
    LogUniform,
    ParamSpace,
    Uniform,
    default_space,
    load_space,
    sample,
    validate_assignment,
)
from .tpe import tpe_suggest
from .trials import best_trial, run_trial, split_trials

__all__ = [
    "DEFAULT_GRIDS",
    "grid_points",
    "grid_search",
    "validate_grid",
    "CategoricalParzen",
    "ContinuousParzen",
    "build_parzen",
    "Suggester",
    "create_suggester",
    "random_suggest",
    "Choice",
    "ChoiceOption",
    "IntUniform",
    "LogUniform",
    "ParamSpace",
    "Uniform",
    "default_space",
    "load_space",
    "sample",
    "validate_assignment",
    "tpe_suggest",
    "best_trial",
    "run_trial",
    "split_trials",
]

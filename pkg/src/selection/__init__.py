"""Baseline scoring, per-algorithm workers and the selection loop."""

from .baseline import compute_baseline
from .engine import RecTuneEngine, selection_config_from_env
from .orchestrator import (
    SelectionOrchestrator,
    all_failed,
    ensure_not_failed,
    registry_candidates,
    resolve_algorithms,
    run_selection,
)
from .worker import AlgorithmWorker, Candidate, create_algorithm_worker

__all__ = [
    "compute_baseline",
    "RecTuneEngine",
    "selection_config_from_env",
    "SelectionOrchestrator",
    "all_failed",
    "ensure_not_failed",
    "registry_candidates",
    "resolve_algorithms",
    "run_selection",
    "AlgorithmWorker",
    "Candidate",
    "create_algorithm_worker",
]

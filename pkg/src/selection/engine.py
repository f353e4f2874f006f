"""
One-call facade over the selection loop.
"""

from typing import Any, Mapping, Optional

from ..algorithms.base import FittedModel
from ..algorithms.registry import build_model
from ..config import config as app_config
from ..data.ratings import RatingsTable
from ..models.enums import Metric, Strategy
from ..models.schemas import ParamAssignment, SelectionConfig, SelectionReport, TpeConfig
from ..search.space import ParamSpace
from .orchestrator import run_selection


def selection_config_from_env(**overrides: Any) -> SelectionConfig:
    """SelectionConfig with RECTUNE_* defaults; keyword arguments win."""
    fields: dict[str, Any] = {
        "metric": Metric(app_config.METRIC),
        "strategy": Strategy(app_config.STRATEGY),
        "time_budget": app_config.time_budget_or_none(),
        "max_evals_per_algorithm": app_config.MAX_EVALS if app_config.MAX_EVALS > 0 else None,
        "gate_evals": app_config.GATE_EVALS,
        "parallelism": app_config.JOBS,
        "seed": app_config.SEED,
        "cv_folds": app_config.CV_FOLDS,
        "final_cv_folds": app_config.FINAL_CV_FOLDS,
        "tpe": TpeConfig(
            n_startup=app_config.TPE_STARTUP,
            gamma=app_config.TPE_GAMMA,
            n_candidates=app_config.TPE_CANDIDATES,
        ),
    }
    fields.update(overrides)
    return SelectionConfig(**fields)


class RecTuneEngine:
    """
    Select and tune a rating predictor in one call.

        engine = RecTuneEngine(max_evals_per_algorithm=25, time_budget=None)
        algorithm, params, score, report = engine.train(table)
        model = engine.best_model(table)
    """

    def __init__(
        self,
        config: Optional[SelectionConfig] = None,
        space_overrides: Optional[Mapping[str, ParamSpace]] = None,
        **overrides: Any,
    ):
        self.config = config or selection_config_from_env(**overrides)
        self.space_overrides = space_overrides
        self.report: Optional[SelectionReport] = None

    def train(self, table: RatingsTable) -> tuple[str, ParamAssignment, float, SelectionReport]:
        """
        Run the selection.

        Returns:
            (best algorithm, best params, best score, full report)
        """
        self.report = run_selection(self.config, table, space_overrides=self.space_overrides)
        winner = self.report.winner
        return winner.algorithm, dict(winner.params), winner.loss, self.report

    def best_model(self, table: RatingsTable) -> FittedModel:
        """Fit the winner on the whole table."""
        if self.report is None:
            raise RuntimeError("call train() before best_model()")
        winner = self.report.winner
        return build_model(winner.algorithm, winner.params, table, self.config.seed)

"""
Pydantic schemas for RecTune data models.
"""

import codecs
import math
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import Metric, OutcomeStatus, Strategy, TrialStatus

# One concrete point of a hyperparameter space: name -> value on the active path.
ParamAssignment = dict[str, Any]


class RatingScale(BaseModel):
    """Closed interval of valid rating values."""

    model_config = ConfigDict(frozen=True)

    min: float = Field(..., description="Lowest valid rating")
    max: float = Field(..., description="Highest valid rating")

    @model_validator(mode="after")
    def _check_order(self) -> "RatingScale":
        if not self.min < self.max:
            raise ValueError(f"rating scale needs min < max, got [{self.min}, {self.max}]")
        return self

    def contains(self, value: float) -> bool:
        return self.min <= value <= self.max


class FormatSpec(BaseModel):
    """How to read a delimited ratings file."""

    model_config = ConfigDict(frozen=True)

    delimiter: str = Field(default="\t", description="Field separator")
    columns: tuple[str, ...] = Field(
        default=("user", "item", "rating", "timestamp"),
        description="Column order; must name 'user', 'item' and 'rating'",
    )
    header: bool = Field(default=False, description="Whether the first line is a header")
    encoding: str = Field(default="utf-8", description="Text encoding of the file")
    scale: RatingScale = Field(default_factory=lambda: RatingScale(min=1.0, max=5.0))

    @field_validator("columns")
    @classmethod
    def _required_columns(cls, columns: tuple[str, ...]) -> tuple[str, ...]:
        missing = {"user", "item", "rating"} - set(columns)
        if missing:
            raise ValueError(f"format must declare columns {sorted(missing)}")
        if len(set(columns)) != len(columns):
            raise ValueError("column names must be unique")
        return columns

    @field_validator("encoding")
    @classmethod
    def _known_encoding(cls, encoding: str) -> str:
        try:
            return codecs.lookup(encoding).name
        except LookupError:
            raise ValueError(f"unknown encoding '{encoding}'") from None

    def position(self, column: str) -> int:
        return self.columns.index(column)


class TpeConfig(BaseModel):
    """Tree-structured Parzen Estimator constants."""

    model_config = ConfigDict(frozen=True)

    n_startup: int = Field(default=20, ge=1, description="Random trials before modelling")
    gamma: float = Field(default=0.25, gt=0.0, lt=1.0, description="Quantile of good trials")
    n_candidates: int = Field(default=24, ge=1, description="Draws from l(x) per parameter")


class EvalResult(BaseModel):
    """Cross-validated loss of one (algorithm, assignment) pair."""

    model_config = ConfigDict(frozen=True)

    metric: Metric
    mean_loss: float = Field(..., ge=0.0)
    per_fold_losses: list[float] = Field(default_factory=list)
    measures: dict[str, float] = Field(
        default_factory=dict,
        description="Mean of every supported metric, keyed by metric name",
    )
    fit_time: Optional[float] = Field(default=None, description="Summed fit seconds")
    test_time: Optional[float] = Field(default=None, description="Summed scoring seconds")

    @model_validator(mode="after")
    def _check_mean(self) -> "EvalResult":
        if self.per_fold_losses:
            if any(loss < 0 for loss in self.per_fold_losses):
                raise ValueError("fold losses must be non-negative")
            expected = sum(self.per_fold_losses) / len(self.per_fold_losses)
            if not math.isclose(expected, self.mean_loss, rel_tol=1e-12, abs_tol=1e-15):
                raise ValueError("mean_loss must equal the mean of per_fold_losses")
        return self

    @property
    def n_folds(self) -> int:
        return len(self.per_fold_losses)

    def mean_fit_time(self) -> Optional[float]:
        if self.fit_time is None or not self.per_fold_losses:
            return None
        return self.fit_time / len(self.per_fold_losses)


class Trial(BaseModel):
    """One evaluated hyperparameter assignment."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0, description="Position in the algorithm's history")
    assignment: ParamAssignment = Field(default_factory=dict)
    loss: Optional[float] = Field(default=None, description="Target metric mean (ok trials)")
    status: TrialStatus = TrialStatus.OK
    duration: Optional[float] = Field(default=None, description="Wall seconds")
    mean_fit_time: Optional[float] = Field(default=None, description="Fit seconds per fold")
    seed: Optional[int] = Field(default=None, description="Seed the trial was evaluated with")
    error: Optional[str] = Field(default=None, description="Failure message")

    @model_validator(mode="after")
    def _check_loss(self) -> "Trial":
        if self.status == TrialStatus.OK and (self.loss is None or not math.isfinite(self.loss)):
            raise ValueError("an ok trial needs a finite loss")
        return self

    @property
    def ok(self) -> bool:
        return self.status == TrialStatus.OK

    def without_timings(self) -> "Trial":
        return self.model_copy(update={"duration": None, "mean_fit_time": None})


class SelectionConfig(BaseModel):
    """Everything a selection run needs besides the data."""

    model_config = ConfigDict(frozen=True)

    metric: Metric = Metric.RMSE
    time_budget: Optional[float] = Field(default=None, gt=0, description="Global wall seconds")
    max_evals_per_algorithm: Optional[int] = Field(default=None, ge=1)
    strategy: Strategy = Strategy.TPE
    gate_evals: int = Field(default=10, ge=1)
    algorithms: list[str] = Field(default_factory=list, description="Empty means all eleven")
    parallelism: int = Field(default=1, ge=1)
    seed: int = 42
    cv_folds: int = Field(default=3, ge=2)
    final_cv_folds: Optional[int] = Field(default=5, ge=2)
    tpe: TpeConfig = Field(default_factory=TpeConfig)

    @model_validator(mode="after")
    def _needs_a_limit(self) -> "SelectionConfig":
        if self.time_budget is None and self.max_evals_per_algorithm is None:
            raise ValueError("set a time budget, a max evaluation count, or both")
        return self


class AlgorithmOutcome(BaseModel):
    """How one algorithm's optimization ended."""

    model_config = ConfigDict(frozen=True)

    name: str
    status: OutcomeStatus
    best_trial: Optional[Trial] = None
    n_trials: int = 0
    trial_history: list[Trial] = Field(default_factory=list)

    @property
    def best_loss(self) -> Optional[float]:
        return self.best_trial.loss if self.best_trial is not None else None

    def without_timings(self) -> "AlgorithmOutcome":
        return self.model_copy(
            update={
                "best_trial": self.best_trial.without_timings() if self.best_trial else None,
                "trial_history": [t.without_timings() for t in self.trial_history],
            }
        )


class Winner(BaseModel):
    """The selected algorithm and its tuned hyperparameters."""

    model_config = ConfigDict(frozen=True)

    algorithm: str
    params: ParamAssignment = Field(default_factory=dict)
    loss: float = Field(..., description="Best search loss")
    beat_baseline: bool = Field(
        default=True,
        description="False when nothing beat the random baseline and it is returned instead",
    )
    final_eval: Optional[EvalResult] = Field(
        default=None, description="Re-evaluation at the reporting fold count"
    )

    def without_timings(self) -> "Winner":
        if self.final_eval is None:
            return self
        final = self.final_eval.model_copy(update={"fit_time": None, "test_time": None})
        return self.model_copy(update={"final_eval": final})


class SelectionReport(BaseModel):
    """Result of a selection run: baseline, per-algorithm outcomes and the winner."""

    model_config = ConfigDict(frozen=True)

    baseline_loss: float
    outcomes: dict[str, AlgorithmOutcome] = Field(default_factory=dict)
    winner: Winner
    wall_time: Optional[float] = None

    def without_timings(self) -> "SelectionReport":
        return self.model_copy(
            update={
                "outcomes": {k: o.without_timings() for k, o in self.outcomes.items()},
                "winner": self.winner.without_timings(),
                "wall_time": None,
            }
        )

    def summary_rows(self) -> list[dict[str, Any]]:
        """Flat per-algorithm rows for tables."""
        rows = []
        for name, outcome in self.outcomes.items():
            rows.append(
                {
                    "algorithm": name,
                    "status": outcome.status.value,
                    "trials": outcome.n_trials,
                    "best_loss": outcome.best_loss,
                    "best_params": outcome.best_trial.assignment if outcome.best_trial else {},
                }
            )
        return rows


class DatasetDigest(BaseModel):
    """Enough about the input data to recognise and reload it."""

    model_config = ConfigDict(frozen=True)

    path: str
    n_users: int
    n_items: int
    n_ratings: int
    scale: RatingScale
    format: FormatSpec


class ManifestBase(BaseModel):
    """Fields shared by every report file the CLI writes."""

    model_config = ConfigDict(frozen=True)

    command: list[str] = Field(default_factory=list, description="Command-line echo")
    version: str
    dataset: DatasetDigest


class AutoManifest(ManifestBase):
    """Report written by ``auto``."""

    config: SelectionConfig
    space_overrides: Optional[dict[str, Any]] = Field(
        default=None, description="Override spaces as loaded, keyed by algorithm"
    )
    baseline_loss: float
    outcomes: dict[str, AlgorithmOutcome]
    winner: Winner
    wall_time_s: Optional[float] = None

    @classmethod
    def from_report(cls, report: SelectionReport, **fields: Any) -> "AutoManifest":
        return cls(
            baseline_loss=report.baseline_loss,
            outcomes=report.outcomes,
            winner=report.winner,
            wall_time_s=report.wall_time,
            **fields,
        )


class EvaluateManifest(ManifestBase):
    """Report written by ``evaluate``."""

    config: dict[str, Any]
    algorithm: str
    params: ParamAssignment
    result: EvalResult


class GridManifest(ManifestBase):
    """Report written by ``grid``."""

    config: dict[str, Any]
    algorithm: str
    grid: dict[str, list[Any]]
    best: Trial
    trials: list[Trial]
    wall_time_s: Optional[float] = None


class BenchmarkManifest(ManifestBase):
    """Report written by ``benchmark``: every algorithm at its defaults."""

    config: dict[str, Any]
    results: dict[str, EvalResult] = Field(default_factory=dict)
    errors: dict[str, str] = Field(default_factory=dict)

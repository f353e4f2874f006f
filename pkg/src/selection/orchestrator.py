"""
Selection Orchestrator - baseline, parallel per-algorithm search, winner.
"""

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Mapping, Optional, Sequence

from loguru import logger

from ..algorithms.registry import get_algorithm
from ..data.folds import FoldPlan, kfold_split
from ..data.ratings import RatingsTable
from ..errors import SelectionFailedError
from ..evaluation.cross_validation import cross_validate
from ..models.enums import AlgorithmName, OutcomeStatus
from ..models.schemas import (
    AlgorithmOutcome,
    EvalResult,
    ParamAssignment,
    SelectionConfig,
    SelectionReport,
    Winner,
)
from ..search.space import ParamSpace, default_space
from .baseline import compute_baseline
from .worker import Candidate, create_algorithm_worker


def resolve_algorithms(names: Sequence[str]) -> list[AlgorithmName]:
    """Parse an include list; empty means all eleven, in roster order."""
    if not names:
        return list(AlgorithmName)
    parsed = []
    for name in names:
        algo = AlgorithmName.parse(name)
        if algo not in parsed:
            parsed.append(algo)
    return parsed


def registry_candidates(
    config: SelectionConfig,
    table: RatingsTable,
    folds: FoldPlan,
    space_overrides: Optional[Mapping[str, ParamSpace]] = None,
) -> list[Candidate]:
    """Candidates backed by the built-in algorithms and cross-validation."""
    overrides = {AlgorithmName.parse(k): v for k, v in (space_overrides or {}).items()}
    candidates = []
    for algo in resolve_algorithms(config.algorithms):
        spec = get_algorithm(algo)

        def evaluate(assignment: ParamAssignment, seed: int, spec=spec) -> EvalResult:
            return cross_validate(spec, assignment, table, folds, config.metric, seed)

        space = overrides.get(algo, default_space(algo))
        candidates.append(Candidate(name=algo.value, space=space, evaluate=evaluate))
    return candidates


class SelectionOrchestrator:
    """
    Coordinates one selection run.

    Flow:
    1. Baseline -> Normal Predictor loss on the search folds
    2. Workers -> one per algorithm, at most ``parallelism`` at a time
    3. Winner -> lowest best loss, then lower mean fit time, then name
    4. Final evaluation -> winner re-scored at ``final_cv_folds``
    """

    def __init__(
        self,
        config: SelectionConfig,
        candidates: Optional[Sequence[Candidate]] = None,
        baseline_loss: Optional[float] = None,
        space_overrides: Optional[Mapping[str, ParamSpace]] = None,
    ):
        """
        Args:
            config: Selection settings
            candidates: Algorithms to search; defaults to the registry
            baseline_loss: Precomputed baseline; computed when omitted
            space_overrides: Replacement spaces keyed by algorithm name
        """
        self.config = config
        self._candidates = list(candidates) if candidates is not None else None
        self._baseline_loss = baseline_loss
        self.space_overrides = space_overrides or {}
        self.stop = threading.Event()

    def run(self, table: RatingsTable) -> SelectionReport:
        """
        Run the full selection on ``table``.

        Returns:
            SelectionReport; when nothing beats the baseline the winner is the
            Normal Predictor with ``beat_baseline=False``
        """
        cfg = self.config
        started = time.monotonic()
        deadline = started + cfg.time_budget if cfg.time_budget is not None else None
        folds = kfold_split(table, cfg.cv_folds, cfg.seed)

        baseline_loss = self._baseline_loss
        if baseline_loss is None:
            baseline_loss = compute_baseline(table, cfg.metric, cfg.cv_folds, cfg.seed, folds=folds)

        candidates = self._candidates
        if candidates is None:
            candidates = registry_candidates(cfg, table, folds, self.space_overrides)
        logger.info(
            f"Searching {len(candidates)} algorithms with {cfg.strategy.value}, "
            f"{cfg.parallelism} worker(s)"
        )

        workers = [
            create_algorithm_worker(c, cfg, baseline_loss, self.stop, deadline) for c in candidates
        ]
        with ThreadPoolExecutor(max_workers=cfg.parallelism, thread_name_prefix="rectune") as pool:
            futures = [pool.submit(worker.run) for worker in workers]
            outcomes: dict[str, AlgorithmOutcome] = {}
            for worker, future in zip(workers, futures):
                try:
                    outcomes[worker.name] = future.result()
                except Exception as e:
                    logger.error(f"{worker.name} worker crashed: {e}")
                    outcomes[worker.name] = AlgorithmOutcome(
                        name=worker.name,
                        status=OutcomeStatus.FAILED,
                        n_trials=len(worker.trials),
                        trial_history=list(worker.trials),
                    )

        winner = self._pick_winner(outcomes, baseline_loss)
        final = self._final_evaluation(winner, table)
        if final is not None:
            winner = winner.model_copy(update={"final_eval": final})

        wall_time = time.monotonic() - started
        logger.info(
            f"Winner: {winner.algorithm} loss={winner.loss:.4f}"
            + ("" if winner.beat_baseline else " (nothing beat the baseline)")
        )
        return SelectionReport(
            baseline_loss=baseline_loss, outcomes=outcomes, winner=winner, wall_time=wall_time
        )

    def _pick_winner(self, outcomes: Mapping[str, AlgorithmOutcome], baseline_loss: float) -> Winner:
        # NormalPredictor is the baseline itself, so it never wins on its own trials.
        # Fit time only breaks ties when the run is timed; otherwise ties go by name.
        timed = self.config.time_budget is not None

        def rank(outcome: AlgorithmOutcome) -> tuple:
            best = outcome.best_trial
            if not timed:
                return (best.loss, outcome.name)
            fit_time = best.mean_fit_time if best.mean_fit_time is not None else float("inf")
            return (best.loss, fit_time, outcome.name)

        ranked = sorted(
            (
                o
                for o in outcomes.values()
                if o.best_trial is not None and o.name != AlgorithmName.NORMAL_PREDICTOR.value
            ),
            key=rank,
        )
        if ranked and ranked[0].best_trial.loss < baseline_loss:
            best = ranked[0]
            return Winner(algorithm=best.name, params=best.best_trial.assignment, loss=best.best_trial.loss)
        return Winner(
            algorithm=AlgorithmName.NORMAL_PREDICTOR.value,
            params={},
            loss=baseline_loss,
            beat_baseline=False,
        )

    def _final_evaluation(self, winner: Winner, table: RatingsTable) -> Optional[EvalResult]:
        cfg = self.config
        if cfg.final_cv_folds is None:
            return None
        try:
            spec = get_algorithm(winner.algorithm)
        except ValueError:
            return None
        try:
            folds = kfold_split(table, cfg.final_cv_folds, cfg.seed)
            result = cross_validate(spec, winner.params, table, folds, cfg.metric, cfg.seed)
        except Exception as e:
            logger.warning(f"Final evaluation of {winner.algorithm} failed: {e}")
            return None
        logger.info(
            f"Final {cfg.final_cv_folds}-fold {cfg.metric.value} of {winner.algorithm}: "
            f"{result.mean_loss:.4f}"
        )
        return result


def run_selection(
    config: SelectionConfig,
    table: RatingsTable,
    candidates: Optional[Sequence[Candidate]] = None,
    baseline_loss: Optional[float] = None,
    space_overrides: Optional[Mapping[str, ParamSpace]] = None,
) -> SelectionReport:
    """Run one selection; see SelectionOrchestrator."""
    orchestrator = SelectionOrchestrator(config, candidates, baseline_loss, space_overrides)
    return orchestrator.run(table)


def all_failed(report: SelectionReport) -> bool:
    """True when every algorithm ended with status failed."""
    return bool(report.outcomes) and all(
        o.status == OutcomeStatus.FAILED for o in report.outcomes.values()
    )


def ensure_not_failed(report: SelectionReport) -> SelectionReport:
    """Raise SelectionFailedError when every algorithm failed."""
    if all_failed(report):
        raise SelectionFailedError("every algorithm failed; see the trial errors in the report")
    return report

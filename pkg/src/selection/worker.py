"""
Per-algorithm optimization worker.

A worker owns one algorithm's trial history: it suggests, evaluates and
appends trials until its evaluation limit, the shared deadline or the
baseline gate stops it.
"""

import threading
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger

from ..models.enums import OutcomeStatus
from ..models.schemas import AlgorithmOutcome, SelectionConfig, Trial
from ..search.random_search import Suggester, create_suggester
from ..search.space import ParamSpace
from ..search.trials import Evaluator, best_trial, run_trial
from ..utils.seeding import derive_seed


@dataclass(frozen=True)
class Candidate:
    """An algorithm as the selection loop sees it: a name, a space and an evaluator."""

    name: str
    space: ParamSpace
    evaluate: Evaluator


class AlgorithmWorker:
    """Runs the suggest -> evaluate -> gate loop for one candidate."""

    def __init__(
        self,
        candidate: Candidate,
        suggester: Suggester,
        config: SelectionConfig,
        baseline_loss: float,
        stop: threading.Event,
        deadline: Optional[float] = None,
    ):
        self.candidate = candidate
        self.suggester = suggester
        self.config = config
        self.baseline_loss = baseline_loss
        self.stop = stop
        self.deadline = deadline
        self.trials: list[Trial] = []

    @property
    def name(self) -> str:
        return self.candidate.name

    @property
    def max_trials(self) -> Optional[int]:
        if self.candidate.space.is_empty:
            return 1
        return self.config.max_evals_per_algorithm

    def _out_of_time(self) -> bool:
        if self.deadline is not None and time.monotonic() >= self.deadline:
            self.stop.set()
        return self.stop.is_set()

    def _next_trial(self) -> Trial:
        index = len(self.trials)
        seed = derive_seed(self.config.seed, self.name, index)
        assignment = self.suggester(self.trials, self.candidate.space, np.random.default_rng(seed))
        return run_trial(index, assignment, seed, self.candidate.evaluate)

    def run(self) -> AlgorithmOutcome:
        """
        Optimize until a stop condition trips.

        Returns:
            AlgorithmOutcome with the full trial history
        """
        status = OutcomeStatus.COMPLETED
        limit = self.max_trials
        while limit is None or len(self.trials) < limit:
            if self._out_of_time():
                status = OutcomeStatus.TIMED_OUT
                break

            trial = self._next_trial()
            self.trials.append(trial)
            best = best_trial(self.trials)
            if trial.ok:
                logger.info(
                    f"{self.name} #{trial.index}: loss={trial.loss:.4f} best={best.loss:.4f}"
                )
            else:
                logger.info(f"{self.name} #{trial.index}: failed ({trial.error})")

            if len(self.trials) == self.config.gate_evals and (
                best is None or best.loss >= self.baseline_loss
            ):
                logger.info(
                    f"{self.name} pruned after {len(self.trials)} trials: "
                    f"best {'n/a' if best is None else f'{best.loss:.4f}'} "
                    f">= baseline {self.baseline_loss:.4f}"
                )
                status = OutcomeStatus.PRUNED
                break

        best = best_trial(self.trials)
        if self.trials and best is None:
            status = OutcomeStatus.FAILED
        return AlgorithmOutcome(
            name=self.name,
            status=status,
            best_trial=best,
            n_trials=len(self.trials),
            trial_history=list(self.trials),
        )


def create_algorithm_worker(
    candidate: Candidate,
    config: SelectionConfig,
    baseline_loss: float,
    stop: threading.Event,
    deadline: Optional[float] = None,
    suggester: Optional[Suggester] = None,
) -> AlgorithmWorker:
    """
    Create a worker for one candidate.

    Args:
        candidate: Algorithm to optimize
        config: Selection settings (strategy, limits, seed)
        baseline_loss: Loss the candidate must beat by the gate
        stop: Shared stop signal
        deadline: ``time.monotonic()`` value after which no trial starts
        suggester: Override of the strategy's suggest function

    Returns:
        Configured AlgorithmWorker
    """
    suggester = suggester or create_suggester(config.strategy, config.tpe)
    return AlgorithmWorker(candidate, suggester, config, baseline_loss, stop, deadline)

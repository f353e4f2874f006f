"""
Trial bookkeeping shared by every search strategy.
"""

import math
import time
from typing import Callable, Sequence

from loguru import logger

from ..models.enums import TrialStatus
from ..models.schemas import EvalResult, ParamAssignment, Trial

# (assignment, seed) -> cross-validated result
Evaluator = Callable[[ParamAssignment, int], EvalResult]


def split_trials(trials: Sequence[Trial], gamma: float) -> tuple[list[Trial], list[Trial]]:
    """
    Partition a history into good and bad trials.

    The ``max(1, ceil(gamma * n_ok))`` lowest-loss ok trials are good, ties
    going to the lower index; every other trial, failed ones included, is bad.

    Raises:
        ValueError: No ok trial in the history
    """
    ok = [t for t in trials if t.ok]
    if not ok:
        raise ValueError("split_trials needs at least one ok trial")
    n_good = max(1, math.ceil(gamma * len(ok)))
    ranked = sorted(ok, key=lambda t: (t.loss, t.index))
    good_ids = {t.index for t in ranked[:n_good]}
    good = ranked[:n_good]
    bad = [t for t in trials if t.index not in good_ids]
    return good, bad


def best_trial(trials: Sequence[Trial]) -> Trial | None:
    """Lowest-loss ok trial, earliest on ties."""
    ok = [t for t in trials if t.ok]
    return min(ok, key=lambda t: (t.loss, t.index)) if ok else None


def run_trial(index: int, assignment: ParamAssignment, seed: int, evaluate: Evaluator) -> Trial:
    """Evaluate one assignment; any exception becomes a failed Trial."""
    started = time.perf_counter()
    try:
        result = evaluate(assignment, seed)
    except Exception as e:
        logger.warning(f"Trial {index} failed: {e}")
        return Trial(
            index=index,
            assignment=assignment,
            status=TrialStatus.FAILED,
            duration=time.perf_counter() - started,
            seed=seed,
            error=f"{type(e).__name__}: {e}",
        )
    if not math.isfinite(result.mean_loss):
        return Trial(
            index=index,
            assignment=assignment,
            status=TrialStatus.FAILED,
            duration=time.perf_counter() - started,
            seed=seed,
            error="non-finite loss",
        )
    return Trial(
        index=index,
        assignment=assignment,
        loss=result.mean_loss,
        status=TrialStatus.OK,
        duration=time.perf_counter() - started,
        mean_fit_time=result.mean_fit_time(),
        seed=seed,
    )

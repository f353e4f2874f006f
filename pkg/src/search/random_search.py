"""
Random search and the strategy lookup used by the selection loop.
"""

from typing import Callable, Sequence

import numpy as np

from ..models.enums import Strategy
from ..models.schemas import ParamAssignment, TpeConfig, Trial
from .space import ParamSpace, sample
from .tpe import tpe_suggest

# (history, space, rng) -> next assignment
Suggester = Callable[[Sequence[Trial], ParamSpace, np.random.Generator], ParamAssignment]


def random_suggest(space: ParamSpace, rng: np.random.Generator) -> ParamAssignment:
    """One independent draw from the prior."""
    return sample(space, rng)


def create_suggester(strategy: Strategy | str, tpe: TpeConfig | None = None) -> Suggester:
    """
    Factory for a strategy's suggest function.

    Args:
        strategy: ``tpe`` or ``random``
        tpe: TPE constants (defaults when omitted)

    Returns:
        Callable taking (history, space, rng)
    """
    strategy = Strategy(strategy)
    if strategy == Strategy.RANDOM:
        return lambda trials, space, rng: random_suggest(space, rng)
    tpe = tpe or TpeConfig()
    return lambda trials, space, rng: tpe_suggest(trials, space, tpe, rng)

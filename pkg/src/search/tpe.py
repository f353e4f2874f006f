"""
Tree-structured Parzen Estimator suggestions.

Each parameter on the active path is modelled independently: a density l(x)
over the good trials and g(x) over the bad ones. Candidates are drawn from
l and the one maximizing log l(x) - log g(x) is kept. Choice parameters pick
an option the same way and only trials that took the same option inform the
nested parameters.
"""

from typing import Any, Sequence

import numpy as np

from ..models.schemas import ParamAssignment, TpeConfig, Trial
from .parzen import build_parzen, from_model
from .space import Choice, IntUniform, ParamDomain, ParamSpace, sample
from .trials import split_trials


def _values(trials: Sequence[Trial], name: str, domain: ParamDomain) -> list[Any]:
    return [t.assignment[name] for t in trials if domain.contains(t.assignment.get(name))]


def _suggest_value(
    domain: ParamDomain,
    good: Sequence[Trial],
    bad: Sequence[Trial],
    name: str,
    n_candidates: int,
    rng: np.random.Generator,
) -> Any:
    below = build_parzen(_values(good, name, domain), domain)
    above = build_parzen(_values(bad, name, domain), domain)
    candidates = below.sample(rng, n_candidates)

    if isinstance(domain, Choice):
        scores = below.log_pdf(candidates) - above.log_pdf(candidates)
        return domain.options[int(candidates[int(np.argmax(scores))])].label

    if isinstance(domain, IntUniform):
        candidates = np.clip(np.round(candidates), domain.low, domain.high)
    scores = below.log_pdf(candidates) - above.log_pdf(candidates)
    return from_model(domain, float(candidates[int(np.argmax(scores))]))


def _took_option(trial: Trial, name: str, domain: Choice, index: int) -> bool:
    value = trial.assignment.get(name)
    return domain.contains(value) and domain.index_of(value) == index


def _suggest_space(
    space: ParamSpace,
    good: Sequence[Trial],
    bad: Sequence[Trial],
    config: TpeConfig,
    rng: np.random.Generator,
    out: ParamAssignment,
) -> None:
    for name, domain in space.params.items():
        value = _suggest_value(domain, good, bad, name, config.n_candidates, rng)
        out[name] = value
        if isinstance(domain, Choice):
            nested = domain.options[domain.index_of(value)].space
            if nested is not None:
                chosen = domain.index_of(value)
                _suggest_space(
                    nested,
                    [t for t in good if _took_option(t, name, domain, chosen)],
                    [t for t in bad if _took_option(t, name, domain, chosen)],
                    config,
                    rng,
                    out,
                )


def tpe_suggest(
    trials: Sequence[Trial],
    space: ParamSpace,
    config: TpeConfig,
    rng: np.random.Generator,
) -> ParamAssignment:
    """
    Propose the next assignment.

    Prior sampling is used until ``config.n_startup`` ok trials exist.

    Args:
        trials: History of the algorithm being optimized
        space: Its search space
        config: TPE constants
        rng: Caller-owned generator

    Returns:
        Assignment on a valid active path of ``space``
    """
    n_ok = sum(1 for t in trials if t.ok)
    if n_ok < config.n_startup or space.is_empty:
        return sample(space, rng)
    good, bad = split_trials(trials, config.gamma)
    assignment: ParamAssignment = {}
    _suggest_space(space, good, bad, config, rng, assignment)
    return assignment

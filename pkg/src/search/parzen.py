"""
Parzen estimators over a single parameter domain.

Continuous domains use a mixture of truncated Gaussians centred on the
observations plus one uniform prior component, all weighted equally.
LogUniform domains are modelled in log coordinates. Choice domains use
smoothed counts.
"""

import math
from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np
from scipy.special import logsumexp
from scipy.stats import truncnorm

from .space import Choice, IntUniform, LogUniform, ParamDomain


@dataclass(frozen=True, eq=False)
class ContinuousParzen:
    """Mixture density on [low, high] in model coordinates."""

    low: float
    high: float
    mus: np.ndarray
    sigmas: np.ndarray
    weights: np.ndarray  # observations first, prior last

    def log_pdf(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        inside = (x >= self.low) & (x <= self.high)
        log_prior = np.full(x.shape, -math.log(self.high - self.low))
        components = [np.log(self.weights[-1]) + log_prior]
        if len(self.mus):
            a = (self.low - self.mus) / self.sigmas
            b = (self.high - self.mus) / self.sigmas
            kernel = truncnorm.logpdf(
                x[:, None], a[None, :], b[None, :], loc=self.mus[None, :], scale=self.sigmas[None, :]
            )
            components.append((np.log(self.weights[:-1])[None, :] + kernel).T)
        stacked = np.vstack([np.atleast_2d(c) for c in components])
        density = logsumexp(stacked, axis=0)
        return np.where(inside, density, -np.inf)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        which = rng.choice(len(self.weights), size=size, p=self.weights)
        out = rng.uniform(self.low, self.high, size=size)
        from_kernel = which < len(self.mus)
        if from_kernel.any():
            mus = self.mus[which[from_kernel]]
            sigmas = self.sigmas[which[from_kernel]]
            out[from_kernel] = truncnorm.rvs(
                (self.low - mus) / sigmas,
                (self.high - mus) / sigmas,
                loc=mus,
                scale=sigmas,
                random_state=rng,
            )
        return np.clip(out, self.low, self.high)


@dataclass(frozen=True, eq=False)
class CategoricalParzen:
    """Option probabilities proportional to 1 + observation count."""

    probabilities: np.ndarray

    def log_pdf(self, indices) -> np.ndarray:
        return np.log(self.probabilities[np.asarray(indices, dtype=np.int64)])

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(len(self.probabilities), size=size, p=self.probabilities)


ParzenDensity = Union[ContinuousParzen, CategoricalParzen]


def to_model(domain: ParamDomain, values) -> np.ndarray:
    """Map parameter values into the coordinates the density lives in."""
    values = np.asarray(values, dtype=np.float64)
    return np.log(values) if isinstance(domain, LogUniform) else values


def from_model(domain: ParamDomain, x: float) -> Any:
    """Map a model coordinate back to a parameter value inside the domain."""
    if isinstance(domain, LogUniform):
        return float(min(max(math.exp(x), domain.low), domain.high))
    if isinstance(domain, IntUniform):
        return int(min(max(round(x), domain.low), domain.high))
    return float(min(max(x, domain.low), domain.high))


def model_bounds(domain: ParamDomain) -> tuple[float, float]:
    if isinstance(domain, LogUniform):
        return math.log(domain.low), math.log(domain.high)
    return float(domain.low), float(domain.high)


def bandwidths(mus: np.ndarray, low: float, high: float) -> np.ndarray:
    """
    Distance to the farther of each observation's neighbours, the domain
    bounds standing in for missing neighbours, clipped to
    [range / min(100, n + 1), range].
    """
    span = high - low
    n = len(mus)
    if n == 0:
        return np.empty(0)
    order = np.argsort(mus, kind="stable")
    ordered = mus[order]
    left = np.diff(np.concatenate([[low], ordered]))
    right = np.diff(np.concatenate([ordered, [high]]))
    sigmas_sorted = np.clip(np.maximum(left, right), span / min(100, n + 1), span)
    sigmas = np.empty(n)
    sigmas[order] = sigmas_sorted
    return sigmas


def build_parzen(values: Sequence[Any], domain: ParamDomain) -> ParzenDensity:
    """
    Fit a Parzen density to observed values of one parameter.

    Args:
        values: Observed values (parameter coordinates)
        domain: Domain they were drawn from

    Returns:
        CategoricalParzen for Choice, ContinuousParzen otherwise; with no
        values the density equals the prior
    """
    if isinstance(domain, Choice):
        counts = np.zeros(len(domain.options))
        for value in values:
            counts[domain.index_of(value)] += 1
        smoothed = counts + 1.0
        return CategoricalParzen(probabilities=smoothed / smoothed.sum())

    low, high = model_bounds(domain)
    mus = np.clip(to_model(domain, list(values)), low, high) if len(values) else np.empty(0)
    n = len(mus)
    return ContinuousParzen(
        low=low,
        high=high,
        mus=mus,
        sigmas=bandwidths(mus, low, high),
        weights=np.full(n + 1, 1.0 / (n + 1)),
    )

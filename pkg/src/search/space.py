"""
Tree-structured hyperparameter spaces.

A space maps parameter names to domains. A Choice domain may attach a nested
space to any of its options; those parameters exist only when the option is
selected. Spaces are pydantic models so they load straight from YAML/JSON:

    {"params": {"lr": {"kind": "loguniform", "low": 1e-4, "high": 0.1}}}
"""

import math
from typing import Annotated, Any, Iterator, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import InvalidAssignmentError, InvalidSpaceError
from ..models.enums import AlgorithmName, SimilarityKind
from ..models.schemas import ParamAssignment


class _Domain(BaseModel):
    model_config = ConfigDict(frozen=True)


class Uniform(_Domain):
    kind: Literal["uniform"] = "uniform"
    low: float
    high: float

    @model_validator(mode="after")
    def _check_bounds(self) -> "Uniform":
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.low < self.high):
            raise ValueError(f"uniform needs finite low < high, got [{self.low}, {self.high}]")
        return self

    def contains(self, value: Any) -> bool:
        return _is_number(value) and self.low <= value <= self.high


class LogUniform(_Domain):
    kind: Literal["loguniform"] = "loguniform"
    low: float = Field(..., gt=0.0)
    high: float

    @model_validator(mode="after")
    def _check_bounds(self) -> "LogUniform":
        if not (math.isfinite(self.high) and self.low < self.high):
            raise ValueError(f"loguniform needs 0 < low < high, got [{self.low}, {self.high}]")
        return self

    def contains(self, value: Any) -> bool:
        return _is_number(value) and self.low <= value <= self.high


class IntUniform(_Domain):
    kind: Literal["int"] = "int"
    low: int
    high: int

    @model_validator(mode="after")
    def _check_bounds(self) -> "IntUniform":
        if not self.low < self.high:
            raise ValueError(f"int needs low < high, got [{self.low}, {self.high}]")
        return self

    def contains(self, value: Any) -> bool:
        return (
            _is_number(value)
            and float(value).is_integer()
            and self.low <= value <= self.high
        )


class ChoiceOption(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: Union[bool, int, float, str]
    space: Optional["ParamSpace"] = None


class Choice(_Domain):
    kind: Literal["choice"] = "choice"
    options: list[ChoiceOption]

    @model_validator(mode="after")
    def _check_options(self) -> "Choice":
        if not self.options:
            raise ValueError("choice needs at least one option")
        labels = [_label_key(o.label) for o in self.options]
        if len(set(labels)) != len(labels):
            raise ValueError(f"choice labels must be unique, got {[o.label for o in self.options]}")
        return self

    @property
    def labels(self) -> list[Any]:
        return [o.label for o in self.options]

    def index_of(self, value: Any) -> int:
        key = _label_key(value)
        for index, option in enumerate(self.options):
            if _label_key(option.label) == key:
                return index
        raise KeyError(value)

    def contains(self, value: Any) -> bool:
        try:
            self.index_of(value)
        except KeyError:
            return False
        return True


ParamDomain = Annotated[
    Union[Uniform, LogUniform, IntUniform, Choice], Field(discriminator="kind")
]


class ParamSpace(BaseModel):
    """Named domains; nested names must be unique along every root-to-leaf path."""

    model_config = ConfigDict(frozen=True)

    params: dict[str, ParamDomain] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _unique_along_paths(self) -> "ParamSpace":
        _check_paths(self, frozenset())
        return self

    @property
    def is_empty(self) -> bool:
        return not self.params


ChoiceOption.model_rebuild()
Choice.model_rebuild()
ParamSpace.model_rebuild()


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


def _label_key(label: Any) -> tuple[str, Any]:
    # True == 1 in Python; keep booleans apart from numbers.
    return ("bool" if isinstance(label, (bool, np.bool_)) else "value", label)


def _check_paths(space: ParamSpace, ancestors: frozenset[str]) -> None:
    for name in space.params:
        if name in ancestors:
            raise InvalidSpaceError(f"parameter '{name}' repeats along a nested path")
    names = ancestors | set(space.params)
    for domain in space.params.values():
        if isinstance(domain, Choice):
            for option in domain.options:
                if option.space is not None:
                    _check_paths(option.space, names)


def load_space(data: dict[str, Any]) -> ParamSpace:
    """Build a space from plain data; accepts ``{"params": {...}}`` or the bare mapping."""
    if "params" not in data or not isinstance(data.get("params"), dict):
        data = {"params": data}
    try:
        return ParamSpace.model_validate(data)
    except ValueError as e:
        raise InvalidSpaceError(str(e)) from e


def _sample_domain(domain: ParamDomain, rng: np.random.Generator) -> Any:
    if isinstance(domain, Uniform):
        return float(rng.uniform(domain.low, domain.high))
    if isinstance(domain, LogUniform):
        value = math.exp(rng.uniform(math.log(domain.low), math.log(domain.high)))
        return float(min(max(value, domain.low), domain.high))
    if isinstance(domain, IntUniform):
        return int(rng.integers(domain.low, domain.high + 1))
    return domain.options[int(rng.integers(len(domain.options)))].label


def sample(space: ParamSpace, rng: np.random.Generator) -> ParamAssignment:
    """
    Draw one assignment uniformly from the prior of every active parameter.

    Args:
        space: Space to sample
        rng: Caller-owned generator

    Returns:
        Assignment covering exactly the active path
    """
    assignment: ParamAssignment = {}
    _sample_into(space, rng, assignment)
    return assignment


def _sample_into(space: ParamSpace, rng: np.random.Generator, out: ParamAssignment) -> None:
    for name, domain in space.params.items():
        value = _sample_domain(domain, rng)
        out[name] = value
        if isinstance(domain, Choice):
            nested = domain.options[domain.index_of(value)].space
            if nested is not None:
                _sample_into(nested, rng, out)


def active_params(space: ParamSpace, assignment: ParamAssignment) -> Iterator[tuple[str, ParamDomain]]:
    """(name, domain) pairs on the path selected by ``assignment``."""
    for name, domain in space.params.items():
        yield name, domain
        if isinstance(domain, Choice) and name in assignment and domain.contains(assignment[name]):
            nested = domain.options[domain.index_of(assignment[name])].space
            if nested is not None:
                yield from active_params(nested, assignment)


def validate_assignment(space: ParamSpace, assignment: ParamAssignment) -> None:
    """
    Check that an assignment covers exactly the active path with in-domain values.

    Raises:
        InvalidAssignmentError: A name is missing, extra, or out of its domain
    """
    expected = set()
    for name, domain in active_params(space, assignment):
        expected.add(name)
        if name not in assignment:
            raise InvalidAssignmentError(f"missing parameter '{name}'")
        if not domain.contains(assignment[name]):
            raise InvalidAssignmentError(
                f"parameter '{name}'={assignment[name]!r} outside its {domain.kind} domain"
            )
    extra = sorted(set(assignment) - expected)
    if extra:
        raise InvalidAssignmentError(f"parameters not on the active path: {', '.join(extra)}")


def all_names(space: ParamSpace) -> set[str]:
    """Every parameter name anywhere in the tree."""
    names = set(space.params)
    for domain in space.params.values():
        if isinstance(domain, Choice):
            for option in domain.options:
                if option.space is not None:
                    names |= all_names(option.space)
    return names


def find_domains(space: ParamSpace, name: str) -> list[ParamDomain]:
    """Every domain registered under ``name`` in the tree."""
    found = [space.params[name]] if name in space.params else []
    for domain in space.params.values():
        if isinstance(domain, Choice):
            for option in domain.options:
                if option.space is not None:
                    found.extend(find_domains(option.space, name))
    return found


def _choice(*labels: Any, nested: Optional[dict[Any, ParamSpace]] = None) -> Choice:
    nested = nested or {}
    return Choice(options=[ChoiceOption(label=label, space=nested.get(label)) for label in labels])


def _factorization_space() -> ParamSpace:
    return ParamSpace(
        params={
            "n_factors": IntUniform(low=2, high=100),
            "n_epochs": IntUniform(low=10, high=60),
            "lr": LogUniform(low=1e-4, high=1e-1),
            "reg": LogUniform(low=1e-4, high=0.5),
        }
    )


def _knn_space() -> ParamSpace:
    shrinkage = ParamSpace(params={"shrinkage": Uniform(low=0.0, high=200.0)})
    return ParamSpace(
        params={
            "k": IntUniform(low=10, high=100),
            "min_k": IntUniform(low=1, high=5),
            "sim": _choice(
                *(kind.value for kind in SimilarityKind),
                nested={SimilarityKind.PEARSON_BASELINE.value: shrinkage},
            ),
            "user_based": _choice(True, False),
        }
    )


def default_space(algo: AlgorithmName | str) -> ParamSpace:
    """The built-in search space of an algorithm; empty for parameterless ones."""
    if not isinstance(algo, AlgorithmName):
        algo = AlgorithmName.parse(algo)

    if algo in (AlgorithmName.NORMAL_PREDICTOR, AlgorithmName.SLOPE_ONE):
        return ParamSpace()
    if algo in (AlgorithmName.SVD, AlgorithmName.SVDPP):
        return _factorization_space()
    if algo == AlgorithmName.NMF:
        return ParamSpace(
            params={
                "n_factors": IntUniform(low=5, high=50),
                "n_epochs": IntUniform(low=20, high=100),
                "reg_pu": LogUniform(low=1e-3, high=0.5),
                "reg_qi": LogUniform(low=1e-3, high=0.5),
            }
        )
    if algo == AlgorithmName.BASELINE_ONLY:
        als = ParamSpace(
            params={
                "epochs": IntUniform(low=5, high=30),
                "reg_u": Uniform(low=1.0, high=30.0),
                "reg_i": Uniform(low=1.0, high=25.0),
            }
        )
        sgd = ParamSpace(
            params={
                "lr": LogUniform(low=1e-4, high=1e-1),
                "reg": LogUniform(low=1e-5, high=0.1),
                "epochs": IntUniform(low=5, high=50),
            }
        )
        return ParamSpace(params={"method": _choice("als", "sgd", nested={"als": als, "sgd": sgd})})
    if algo == AlgorithmName.CO_CLUSTERING:
        return ParamSpace(
            params={
                "n_cltr_u": IntUniform(low=2, high=10),
                "n_cltr_i": IntUniform(low=2, high=10),
                "n_epochs": IntUniform(low=10, high=50),
            }
        )
    return _knn_space()

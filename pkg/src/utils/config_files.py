"""
Loaders for user-supplied override files.
YAML and JSON are both accepted (JSON is parsed as YAML).
"""

from pathlib import Path
from typing import Any

import yaml

from ..errors import GridError, InvalidSpaceError
from ..models.enums import AlgorithmName
from ..search.space import ParamSpace, load_space


def load_structured(path: str | Path) -> Any:
    """Parse a YAML or JSON file."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    return yaml.safe_load(path.read_text(encoding="utf-8"))


def load_space_overrides(path: str | Path) -> dict[str, ParamSpace]:
    """
    Load replacement search spaces keyed by algorithm.

    The file maps algorithm names (or slugs) to spaces:

        svd:
          params:
            n_factors: {kind: int, low: 10, high: 200}

    Raises:
        InvalidSpaceError: The file is not a mapping, names an unknown
            algorithm, or holds an invalid space
    """
    try:
        data = load_structured(path)
    except (OSError, yaml.YAMLError) as e:
        raise InvalidSpaceError(f"cannot read space file {path}: {e}") from e
    if not isinstance(data, dict):
        raise InvalidSpaceError("space file must map algorithm names to spaces")

    spaces: dict[str, ParamSpace] = {}
    for key, value in data.items():
        try:
            algo = AlgorithmName.parse(str(key))
        except ValueError as e:
            raise InvalidSpaceError(f"{key}: {e}") from e
        if not isinstance(value, dict):
            raise InvalidSpaceError(f"{key}: space must be a mapping")
        try:
            spaces[algo.value] = load_space(value)
        except InvalidSpaceError as e:
            raise InvalidSpaceError(f"{key}: {e}") from e
    return spaces


def load_grid(path: str | Path) -> dict[str, list[Any]]:
    """
    Load a grid: parameter name -> list of values, optionally under a ``grid`` key.

    Raises:
        GridError: The file is unreadable or a dimension is not a non-empty list
    """
    try:
        data = load_structured(path)
    except (OSError, yaml.YAMLError) as e:
        raise GridError(f"cannot read grid file {path}: {e}") from e
    if isinstance(data, dict) and isinstance(data.get("grid"), dict):
        data = data["grid"]
    if not isinstance(data, dict) or not data:
        raise GridError("grid file must map parameter names to value lists")

    grid: dict[str, list[Any]] = {}
    for key, values in data.items():
        if not isinstance(values, list):
            raise GridError(f"grid entry '{key}' must be a list of values", key=str(key))
        if not values:
            raise GridError(f"grid dimension '{key}' is empty", key=str(key))
        grid[str(key)] = values
    return grid

"""
Exception hierarchy for RecTune.
"""

from typing import Optional


class RecTuneError(Exception):
    """Base class for every error raised by RecTune."""


class ConfigurationError(RecTuneError, ValueError):
    """A configuration value is missing or out of range."""


class DatasetError(RecTuneError, ValueError):
    """A ratings file could not be turned into a RatingsTable."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidSpaceError(RecTuneError, ValueError):
    """A hyperparameter space violates its structural invariants."""


class InvalidAssignmentError(RecTuneError, ValueError):
    """An assignment does not match the active path of its space."""


class MetricError(RecTuneError, ValueError):
    """A metric was asked to score an empty or malformed input."""


class FitDivergedError(RecTuneError):
    """Training produced a non-finite loss."""

    def __init__(self, algorithm: str, epoch: int):
        self.algorithm = algorithm
        self.epoch = epoch
        super().__init__(
            f"{algorithm} diverged at epoch {epoch}: training loss is not finite "
            "(learning rate too high?)"
        )


class FoldEvaluationError(RecTuneError):
    """Fitting or scoring failed on one cross-validation fold."""

    def __init__(self, fold: int, cause: BaseException):
        self.fold = fold
        self.cause = cause
        super().__init__(f"fold {fold}: {type(cause).__name__}: {cause}")


class GridError(RecTuneError, ValueError):
    """A grid definition is empty or names an unknown parameter."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message)


class SelectionFailedError(RecTuneError):
    """Every algorithm in a selection run failed."""

"""
Configuration management for RecTune.
Loads settings from environment variables with sensible defaults.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

from .errors import ConfigurationError


# Load .env file if it exists
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(env_path)


class Config:
    """Application configuration loaded from environment variables."""

    # Reproducibility
    SEED: int = int(os.getenv("RECTUNE_SEED", "42"))

    # Evaluation protocol
    CV_FOLDS: int = int(os.getenv("RECTUNE_CV_FOLDS", "3"))
    FINAL_CV_FOLDS: int = int(os.getenv("RECTUNE_FINAL_CV_FOLDS", "5"))
    METRIC: str = os.getenv("RECTUNE_METRIC", "rmse")

    # Search budget
    STRATEGY: str = os.getenv("RECTUNE_STRATEGY", "tpe")
    MAX_EVALS: int = int(os.getenv("RECTUNE_MAX_EVALS", "100"))
    TIME_BUDGET: float = float(os.getenv("RECTUNE_TIME_BUDGET", "3600"))
    GATE_EVALS: int = int(os.getenv("RECTUNE_GATE_EVALS", "10"))
    JOBS: int = int(os.getenv("RECTUNE_JOBS", "4"))

    # TPE constants
    TPE_STARTUP: int = int(os.getenv("RECTUNE_TPE_STARTUP", "20"))
    TPE_GAMMA: float = float(os.getenv("RECTUNE_TPE_GAMMA", "0.25"))
    TPE_CANDIDATES: int = int(os.getenv("RECTUNE_TPE_CANDIDATES", "24"))

    # Output
    LOG_LEVEL: str = os.getenv("RECTUNE_LOG_LEVEL", "INFO").upper()
    REPORT_DIR: Path = Path(os.getenv("RECTUNE_REPORT_DIR", "reports"))

    # Paths
    PROJECT_ROOT: Path = Path(__file__).parent.parent

    @classmethod
    def validate(cls) -> bool:
        """Validate that the configured values are usable."""
        if cls.CV_FOLDS < 2 or cls.FINAL_CV_FOLDS < 2:
            raise ConfigurationError("RECTUNE_CV_FOLDS and RECTUNE_FINAL_CV_FOLDS must be >= 2")
        if cls.GATE_EVALS < 1:
            raise ConfigurationError("RECTUNE_GATE_EVALS must be >= 1")
        if cls.MAX_EVALS <= 0 and cls.TIME_BUDGET <= 0:
            raise ConfigurationError(
                "At least one limit is required: RECTUNE_MAX_EVALS or RECTUNE_TIME_BUDGET"
            )
        if not 0.0 < cls.TPE_GAMMA < 1.0:
            raise ConfigurationError("RECTUNE_TPE_GAMMA must lie in (0, 1)")
        if cls.TPE_STARTUP < 1 or cls.TPE_CANDIDATES < 1:
            raise ConfigurationError("RECTUNE_TPE_STARTUP and RECTUNE_TPE_CANDIDATES must be >= 1")
        if cls.JOBS < 1:
            raise ConfigurationError("RECTUNE_JOBS must be >= 1")
        return True

    @classmethod
    def time_budget_or_none(cls) -> float | None:
        """The wall-clock budget in seconds, or None when disabled."""
        return cls.TIME_BUDGET if cls.TIME_BUDGET > 0 else None


# Global config instance
config = Config()

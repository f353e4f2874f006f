"""Utilities package."""

from .sampling import RatingSampler
from .seeding import derive_seed

__all__ = [
    "RatingSampler",
    "derive_seed",
]

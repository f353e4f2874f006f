"""Shared fixtures: small synthetic rating tables and files."""

import os
from pathlib import Path

import pytest

from src.data.ratings import RatingsTable
from src.models.schemas import RatingScale

from .helpers import SCALE, make_table, write_ratings


@pytest.fixture
def scale() -> RatingScale:
    return SCALE


@pytest.fixture
def small_table() -> RatingsTable:
    return make_table()


@pytest.fixture
def constant_table() -> RatingsTable:
    triples = [(f"u{u}", f"i{i}", 4.0) for u in range(10) for i in range(8) if (u + i) % 3]
    return RatingsTable.from_triples(triples, SCALE)


@pytest.fixture
def ratings_file(tmp_path, small_table) -> Path:
    return write_ratings(small_table, tmp_path / "ratings.tsv")


@pytest.fixture(scope="session")
def ml100k_path() -> Path:
    path = os.getenv("RECTUNE_ML100K")
    if not path or not Path(path).is_file():
        pytest.skip("RECTUNE_ML100K does not point at MovieLens 100k u.data")
    return Path(path)

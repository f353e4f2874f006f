"""Synthetic rating data for tests."""

from pathlib import Path

import numpy as np

from src.data.ratings import RatingsTable
from src.models.schemas import RatingScale

SCALE = RatingScale(min=1.0, max=5.0)


def make_table(
    n_users: int = 30,
    n_items: int = 20,
    density: float = 0.6,
    seed: int = 0,
    scale: RatingScale = SCALE,
) -> RatingsTable:
    """Integer ratings from a noisy rank-2 model; every user and item rates at least once."""
    rng = np.random.default_rng(seed)
    p = rng.normal(0.0, 1.0, (n_users, 2))
    q = rng.normal(0.0, 1.0, (n_items, 2))
    middle = (scale.min + scale.max) / 2
    spread = (scale.max - scale.min) / 6
    raw = middle + spread * (p @ q.T) + rng.normal(0.0, spread / 3, (n_users, n_items))
    values = np.clip(np.round(raw), scale.min, scale.max)

    mask = rng.random((n_users, n_items)) < density
    mask[np.arange(n_users), np.arange(n_users) % n_items] = True
    mask[np.arange(n_items) % n_users, np.arange(n_items)] = True
    triples = [(f"u{u}", f"i{i}", float(values[u, i])) for u, i in np.argwhere(mask)]
    return RatingsTable.from_triples(triples, scale)


def write_ratings(table: RatingsTable, path: Path) -> Path:
    """Write a table as tab-separated user, item, rating, timestamp lines."""
    lines = [
        f"{table.raw_users[u]}\t{table.raw_items[i]}\t{int(v)}\t{880000000 + n}\n"
        for n, (u, i, v) in enumerate(zip(table.users, table.items, table.values))
    ]
    path.write_text("".join(lines), encoding="utf-8")
    return path

"""
Rating tables: loading delimited files and mapping raw ids to inner ids.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from ..errors import DatasetError
from ..models.schemas import FormatSpec, RatingScale


PRESETS: dict[str, FormatSpec] = {
    "ml100k": FormatSpec(
        delimiter="\t",
        columns=("user", "item", "rating", "timestamp"),
        header=False,
        scale=RatingScale(min=1.0, max=5.0),
    ),
    "ml1m": FormatSpec(
        delimiter="::",
        columns=("user", "item", "rating", "timestamp"),
        header=False,
        scale=RatingScale(min=1.0, max=5.0),
    ),
    "jester": FormatSpec(
        delimiter="\t",
        columns=("user", "item", "rating"),
        header=False,
        scale=RatingScale(min=-10.0, max=10.0),
    ),
    "bookcrossing": FormatSpec(
        delimiter=";",
        columns=("user", "item", "rating"),
        header=True,
        encoding="latin-1",
        scale=RatingScale(min=1.0, max=10.0),
    ),
}


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RatingsTable:
    """
    Ratings as (inner user, inner item, value) triples.

    Inner ids are contiguous ``0..n-1`` and assigned in first-appearance
    order; ``raw_users[inner]`` gives the raw id back. Arrays are read-only
    so a table can be shared between threads.
    """

    raw_users: tuple[str, ...]
    raw_items: tuple[str, ...]
    users: np.ndarray
    items: np.ndarray
    values: np.ndarray
    scale: RatingScale
    _user_index: dict[str, int] = field(init=False, repr=False, compare=False)
    _item_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise DatasetError("empty dataset")
        if not (len(self.users) == len(self.items) == len(self.values)):
            raise DatasetError("user, item and value columns differ in length")
        if self.users.min() < 0 or self.users.max() >= len(self.raw_users):
            raise DatasetError("inner user ids out of range")
        if self.items.min() < 0 or self.items.max() >= len(self.raw_items):
            raise DatasetError("inner item ids out of range")
        outside = (self.values < self.scale.min) | (self.values > self.scale.max)
        if outside.any() or not np.isfinite(self.values).all():
            bad = float(self.values[np.argmax(outside | ~np.isfinite(self.values))])
            raise DatasetError(
                f"rating {bad} outside scale [{self.scale.min}, {self.scale.max}]"
            )
        user_index = {raw: inner for inner, raw in enumerate(self.raw_users)}
        item_index = {raw: inner for inner, raw in enumerate(self.raw_items)}
        if len(user_index) != len(self.raw_users) or len(item_index) != len(self.raw_items):
            raise DatasetError("raw ids must be unique")
        object.__setattr__(self, "_user_index", user_index)
        object.__setattr__(self, "_item_index", item_index)

    @classmethod
    def from_columns(
        cls,
        users: Sequence[object],
        items: Sequence[object],
        values: Iterable[float],
        scale: RatingScale,
    ) -> "RatingsTable":
        """
        Build a table from parallel raw columns.

        Duplicate (user, item) pairs keep their last occurrence.
        """
        values = np.asarray(
            values if isinstance(values, np.ndarray) else list(values), dtype=np.float64
        )
        if len(values) == 0:
            raise DatasetError("empty dataset")
        user_codes, user_uniques = pd.factorize(pd.Series([str(u) for u in users]), sort=False)
        item_codes, item_uniques = pd.factorize(pd.Series([str(i) for i in items]), sort=False)
        user_codes = user_codes.astype(np.int64)
        item_codes = item_codes.astype(np.int64)

        keys = user_codes * len(item_uniques) + item_codes
        _, first_in_reversed = np.unique(keys[::-1], return_index=True)
        keep = np.sort(len(keys) - 1 - first_in_reversed)
        if len(keep) < len(keys):
            logger.debug(f"Dropped {len(keys) - len(keep)} duplicate ratings (kept last)")

        return cls(
            raw_users=tuple(str(u) for u in user_uniques),
            raw_items=tuple(str(i) for i in item_uniques),
            users=_readonly(user_codes[keep].copy()),
            items=_readonly(item_codes[keep].copy()),
            values=_readonly(values[keep].copy()),
            scale=scale,
        )

    @classmethod
    def from_triples(
        cls, triples: Iterable[tuple[object, object, float]], scale: RatingScale
    ) -> "RatingsTable":
        """Convenience constructor from (user, item, value) tuples."""
        rows = list(triples)
        return cls.from_columns(
            [r[0] for r in rows], [r[1] for r in rows], [float(r[2]) for r in rows], scale
        )

    @property
    def n_users(self) -> int:
        return len(self.raw_users)

    @property
    def n_items(self) -> int:
        return len(self.raw_items)

    @property
    def n_ratings(self) -> int:
        return len(self.values)

    def subset(self, indices: np.ndarray) -> "RatingsTable":
        """The same id space restricted to the ratings at ``indices``."""
        indices = np.asarray(indices, dtype=np.int64)
        return RatingsTable(
            raw_users=self.raw_users,
            raw_items=self.raw_items,
            users=_readonly(self.users[indices]),
            items=_readonly(self.items[indices]),
            values=_readonly(self.values[indices]),
            scale=self.scale,
        )

    def inner_user_id(self, raw: object) -> int:
        try:
            return self._user_index[str(raw)]
        except KeyError:
            raise KeyError(f"unknown user '{raw}'") from None

    def inner_item_id(self, raw: object) -> int:
        try:
            return self._item_index[str(raw)]
        except KeyError:
            raise KeyError(f"unknown item '{raw}'") from None

    def raw_user_id(self, inner: int) -> str:
        return self.raw_users[inner]

    def raw_item_id(self, inner: int) -> str:
        return self.raw_items[inner]

    def has_user(self, raw: object) -> bool:
        return str(raw) in self._user_index

    def has_item(self, raw: object) -> bool:
        return str(raw) in self._item_index


_LINE_IN_MESSAGE = re.compile(r"line (\d+)")


def load_ratings(path: str | Path, format: FormatSpec) -> RatingsTable:
    """
    Load a delimited ratings file.

    Every non-blank line must carry exactly ``len(format.columns)`` fields.
    Errors name the offending line; the first bad line wins.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"ratings file not found: {path}")

    header_lines = 1 if format.header else 0
    try:
        frame = pd.read_csv(
            path,
            sep=format.delimiter,
            header=None,
            skiprows=header_lines,
            dtype=str,
            encoding=format.encoding,
            keep_default_na=False,
            skip_blank_lines=False,
            engine="c" if len(format.delimiter) == 1 else "python",
        )
    except pd.errors.EmptyDataError:
        raise DatasetError("empty dataset") from None
    except UnicodeDecodeError as e:
        raise DatasetError(
            f"cannot decode the file as {format.encoding} ({e.reason} at byte {e.start}); "
            "pass the file's encoding"
        ) from None
    except pd.errors.ParserError as e:
        match = _LINE_IN_MESSAGE.search(str(e))
        raise DatasetError(
            f"wrong number of fields ({str(e).strip()})",
            line=int(match.group(1)) if match else None,
        ) from None

    # Blank lines come through as all-missing rows; they carry no rating.
    blank = frame.isna().all(axis=1) | (frame.fillna("") == "").all(axis=1)
    line_numbers = np.arange(len(frame)) + 1 + header_lines
    frame = frame.loc[~blank.to_numpy()]
    line_numbers = line_numbers[~blank.to_numpy()]
    if frame.empty:
        raise DatasetError("empty dataset")

    n_columns = len(format.columns)
    if frame.shape[1] != n_columns:
        raise DatasetError(
            f"expected {n_columns} fields, found {frame.shape[1]}", line=int(line_numbers[0])
        )
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        raise DatasetError(
            f"expected {n_columns} fields", line=int(line_numbers[np.argmax(short)])
        )

    users = frame.iloc[:, format.position("user")].str.strip()
    items = frame.iloc[:, format.position("item")].str.strip()
    raw_ratings = frame.iloc[:, format.position("rating")].str.strip()

    missing_id = ((users == "") | (items == "")).to_numpy()
    if missing_id.any():
        raise DatasetError("empty user or item id", line=int(line_numbers[np.argmax(missing_id)]))

    ratings = pd.to_numeric(raw_ratings, errors="coerce").to_numpy(dtype=np.float64)
    not_numeric = np.isnan(ratings)
    if not_numeric.any():
        position = int(np.argmax(not_numeric))
        raise DatasetError(
            f"non-numeric rating '{raw_ratings.iloc[position]}'",
            line=int(line_numbers[position]),
        )
    outside = (ratings < format.scale.min) | (ratings > format.scale.max)
    if outside.any():
        position = int(np.argmax(outside))
        raise DatasetError(
            f"rating {ratings[position]} outside scale [{format.scale.min}, {format.scale.max}]",
            line=int(line_numbers[position]),
        )

    table = RatingsTable.from_columns(users.to_list(), items.to_list(), ratings, format.scale)
    logger.info(
        f"Loaded {table.n_ratings} ratings from {path.name} "
        f"({table.n_users} users, {table.n_items} items)"
    )
    return table

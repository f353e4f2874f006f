"""Tests for rating file loading and the RatingsTable."""

import codecs

import numpy as np
import pytest

from src.data.ratings import PRESETS, RatingsTable, load_ratings
from src.errors import DatasetError
from src.models.schemas import FormatSpec, RatingScale


def write(tmp_path, text, name="ratings.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadRatings:
    def test_movielens_line(self, tmp_path):
        path = write(tmp_path, "196\t242\t3\t881250949\n")
        table = load_ratings(path, PRESETS["ml100k"])

        assert table.n_ratings == 1
        assert table.raw_user_id(int(table.users[0])) == "196"
        assert table.raw_item_id(int(table.items[0])) == "242"
        assert table.values[0] == 3.0

    def test_inner_ids_follow_first_appearance(self, tmp_path):
        path = write(tmp_path, "b\tx\t1\t0\na\ty\t2\t0\nb\ty\t3\t0\n")
        table = load_ratings(path, PRESETS["ml100k"])

        assert table.raw_users == ("b", "a")
        assert table.raw_items == ("x", "y")
        assert table.users.tolist() == [0, 1, 0]
        assert table.items.tolist() == [0, 1, 1]

    def test_duplicate_pair_keeps_last(self, tmp_path):
        path = write(tmp_path, "a\tx\t1\t0\na\ty\t2\t0\na\tx\t5\t0\n")
        table = load_ratings(path, PRESETS["ml100k"])

        assert table.n_ratings == 2
        x = table.inner_item_id("x")
        assert table.values[table.items == x].tolist() == [5.0]

    def test_empty_file(self, tmp_path):
        with pytest.raises(DatasetError, match="empty dataset"):
            load_ratings(write(tmp_path, ""), PRESETS["ml100k"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="not found"):
            load_ratings(tmp_path / "nope.tsv", PRESETS["ml100k"])

    def test_rating_outside_scale_names_line(self, tmp_path):
        path = write(tmp_path, "a\tx\t3\t0\nb\tx\t9\t0\n")
        with pytest.raises(DatasetError) as info:
            load_ratings(path, PRESETS["ml100k"])
        assert info.value.line == 2
        assert "outside scale" in str(info.value)

    def test_non_numeric_rating_names_line(self, tmp_path):
        path = write(tmp_path, "a\tx\t3\t0\nb\tx\t4\t0\nc\tx\tgood\t0\n")
        with pytest.raises(DatasetError) as info:
            load_ratings(path, PRESETS["ml100k"])
        assert info.value.line == 3

    def test_too_many_fields_names_line(self, tmp_path):
        path = write(tmp_path, "a\tx\t3\t0\nb\tx\t4\t0\nc\tx\t4\t0\textra\n")
        with pytest.raises(DatasetError) as info:
            load_ratings(path, PRESETS["ml100k"])
        assert info.value.line == 3

    def test_header_and_custom_columns(self, tmp_path):
        path = write(tmp_path, "rating;user;item\n8;u1;book\n3;u2;book\n", name="books.csv")
        fmt = FormatSpec(
            delimiter=";",
            columns=("rating", "user", "item"),
            header=True,
            scale=RatingScale(min=1, max=10),
        )
        table = load_ratings(path, fmt)

        assert table.n_ratings == 2
        assert sorted(table.values.tolist()) == [3.0, 8.0]
        assert table.n_items == 1

    def test_multi_character_delimiter(self, tmp_path):
        path = write(tmp_path, "1::10::5::978300760\n2::10::3::978302109\n", name="ratings.dat")
        table = load_ratings(path, PRESETS["ml1m"])

        assert table.n_users == 2
        assert table.values.tolist() == [5.0, 3.0]

    def test_negative_scale(self, tmp_path):
        path = write(tmp_path, "1\t5\t-9.5\n1\t7\t8.25\n")
        table = load_ratings(path, PRESETS["jester"])

        assert table.values.min() == -9.5
        assert table.scale.min == -10.0

    def test_undecodable_bytes_are_a_dataset_error(self, tmp_path):
        path = tmp_path / "latin.tsv"
        path.write_bytes(b"u1\tcaf\xe9\t3\t0\nu2\tcaf\xe9\t4\t0\n")

        with pytest.raises(DatasetError, match="cannot decode"):
            load_ratings(path, PRESETS["ml100k"])

    def test_declared_encoding_is_used(self, tmp_path):
        path = tmp_path / "latin.tsv"
        path.write_bytes(b"u1\tcaf\xe9\t3\t0\nu2\tcaf\xe9\t4\t0\n")
        fmt = PRESETS["ml100k"].model_copy(update={"encoding": "latin-1"})

        table = load_ratings(path, fmt)

        assert table.n_items == 1
        assert table.raw_item_id(0) == "caf\u00e9"


class TestRatingsTable:
    def test_rejects_values_outside_scale(self, scale):
        with pytest.raises(DatasetError):
            RatingsTable.from_triples([("a", "x", 6.0)], scale)

    def test_rejects_empty(self, scale):
        with pytest.raises(DatasetError, match="empty"):
            RatingsTable.from_triples([], scale)

    def test_arrays_are_read_only(self, small_table):
        with pytest.raises(ValueError):
            small_table.values[0] = 1.0

    def test_subset_keeps_id_space(self, small_table):
        part = small_table.subset(np.arange(5))

        assert part.n_ratings == 5
        assert part.n_users == small_table.n_users
        assert part.raw_items == small_table.raw_items

    def test_raw_id_lookup(self, small_table):
        inner = small_table.inner_user_id("u3")
        assert small_table.raw_user_id(inner) == "u3"
        assert small_table.has_item("i0")
        assert not small_table.has_user("nobody")
        with pytest.raises(KeyError):
            small_table.inner_item_id("nothing")

    def test_every_value_within_scale(self, small_table):
        assert small_table.values.min() >= small_table.scale.min
        assert small_table.values.max() <= small_table.scale.max


class TestFormatSpec:
    def test_requires_core_columns(self):
        with pytest.raises(ValueError):
            FormatSpec(columns=("user", "rating"))

    def test_scale_needs_order(self):
        with pytest.raises(ValueError):
            RatingScale(min=5, max=1)

    def test_encoding_defaults_to_utf8(self):
        assert FormatSpec().encoding == "utf-8"

    def test_bookcrossing_is_latin1(self):
        assert PRESETS["bookcrossing"].encoding == codecs.lookup("latin-1").name

    def test_unknown_encoding(self):
        with pytest.raises(ValueError, match="unknown encoding"):
            FormatSpec(encoding="klingon-8")

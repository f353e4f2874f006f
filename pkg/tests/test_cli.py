"""Tests for the rectune command line."""

import json
import sys

import pytest
from loguru import logger
from typer.testing import CliRunner

from src.cli import app

from .helpers import write_ratings

runner = CliRunner()

AUTO_ARGS = [
    "--max-evals", "3",
    "--algos", "baseline-only,slope-one,co-clustering",
    "--cv-folds", "3",
    "--final-cv-folds", "0",
    "--jobs", "2",
    "--seed", "11",
    "--strategy", "random",
    "--log-level", "WARNING",
]


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def constant_file(tmp_path, constant_table):
    return write_ratings(constant_table, tmp_path / "constant.tsv")


class TestAuto:
    def test_same_inputs_same_report(self, ratings_file, tmp_path):
        first = runner.invoke(app, ["auto", "--data", str(ratings_file), "--out", str(tmp_path / "a.json"), *AUTO_ARGS])
        second = runner.invoke(app, ["auto", "--data", str(ratings_file), "--out", str(tmp_path / "b.json"), *AUTO_ARGS])

        assert first.exit_code == 0, first.output
        assert second.exit_code == 0, second.output
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    @pytest.mark.parametrize("strategy", ["random", "tpe"])
    def test_worker_count_does_not_change_the_report(self, strategy, ratings_file, tmp_path):
        base = [
            "--max-evals", "5",
            "--tpe-startup", "2",
            "--algos", "baseline-only,svd,knn-basic,co-clustering",
            "--cv-folds", "3",
            "--final-cv-folds", "3",
            "--seed", "5",
            "--strategy", strategy,
            "--log-level", "WARNING",
        ]
        reports = []
        for jobs in ("1", "4"):
            target = tmp_path / f"jobs{jobs}.json"
            args = [*base, "--jobs", jobs]
            result = runner.invoke(app, ["auto", "--data", str(ratings_file), "--out", str(target), *args])
            assert result.exit_code == 0, result.output
            report = json.loads(target.read_text(encoding="utf-8"))
            report.pop("command")
            report["config"].pop("parallelism")
            reports.append(report)

        assert reports[0] == reports[1]

    def test_report_contents(self, ratings_file, tmp_path):
        target = tmp_path / "report.json"
        result = runner.invoke(app, ["auto", "--data", str(ratings_file), "--out", str(target), *AUTO_ARGS])
        assert result.exit_code == 0, result.output

        report = json.loads(target.read_text(encoding="utf-8"))
        assert set(report["outcomes"]) == {"BaselineOnly", "SlopeOne", "CoClustering"}
        assert report["outcomes"]["SlopeOne"]["n_trials"] == 1
        assert report["config"]["seed"] == 11
        assert report["command"][1:3] == ["--algos=baseline-only,slope-one,co-clustering", "--cv-folds=3"]
        assert report["wall_time_s"] is None
        assert report["dataset"]["n_ratings"] > 0

    def test_missing_file(self, tmp_path):
        target = tmp_path / "never.json"
        result = runner.invoke(app, ["auto", "--data", str(tmp_path / "absent.tsv"), "--out", str(target), *AUTO_ARGS])

        assert result.exit_code == 3
        assert not target.exists()

    def test_unknown_algorithm(self, ratings_file, tmp_path):
        result = runner.invoke(
            app, ["auto", "--data", str(ratings_file), "--max-evals", "2", "--algos", "deep-magic"]
        )
        assert result.exit_code == 2

    def test_replay_reproduces_the_run(self, ratings_file, tmp_path):
        target = tmp_path / "report.json"
        run = runner.invoke(app, ["auto", "--data", str(ratings_file), "--out", str(target), *AUTO_ARGS])
        assert run.exit_code == 0, run.output

        replay = runner.invoke(app, ["replay", str(target), "--log-level", "WARNING"])
        assert replay.exit_code == 0, replay.output
        assert "all trial losses reproduced" in replay.output

    def test_replay_of_a_broken_report(self, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{}", encoding="utf-8")
        assert runner.invoke(app, ["replay", str(broken)]).exit_code == 2


class TestEvaluate:
    @pytest.fixture
    def latin1_file(self, ratings_file, tmp_path):
        text = ratings_file.read_text(encoding="utf-8").replace("\ti0\t", "\tcaf\u00e9\t")
        path = tmp_path / "latin1.tsv"
        path.write_bytes(text.encode("latin-1"))
        return path

    def test_undecodable_file_is_a_dataset_error(self, latin1_file):
        result = runner.invoke(
            app, ["evaluate", "--algo", "normal-predictor", "--data", str(latin1_file), "--cv-folds", "3"]
        )
        assert result.exit_code == 3

    def test_declared_encoding(self, latin1_file, tmp_path):
        target = tmp_path / "eval.json"
        result = runner.invoke(
            app,
            ["evaluate", "--algo", "normal-predictor", "--data", str(latin1_file), "--cv-folds", "3", "--encoding", "latin-1", "--out", str(target)],
        )

        assert result.exit_code == 0, result.output
        report = json.loads(target.read_text(encoding="utf-8"))
        assert report["dataset"]["format"]["encoding"] == "iso8859-1"

    def test_unknown_encoding(self, ratings_file):
        result = runner.invoke(
            app, ["evaluate", "--algo", "svd", "--data", str(ratings_file), "--encoding", "klingon-8"]
        )
        assert result.exit_code == 2

    def test_constant_data_has_zero_error(self, constant_file, tmp_path):
        target = tmp_path / "eval.json"
        result = runner.invoke(
            app,
            ["evaluate", "--algo", "normal-predictor", "--data", str(constant_file), "--cv-folds", "3", "--out", str(target)],
        )

        assert result.exit_code == 0, result.output
        report = json.loads(target.read_text(encoding="utf-8"))
        assert report["result"]["measures"]["rmse"] == pytest.approx(0.0)
        assert report["algorithm"] == "NormalPredictor"

    def test_unknown_algorithm(self, ratings_file):
        result = runner.invoke(app, ["evaluate", "--algo", "deep-magic", "--data", str(ratings_file)])
        assert result.exit_code == 2

    def test_unknown_parameter(self, ratings_file):
        result = runner.invoke(
            app, ["evaluate", "--algo", "svd", "--data", str(ratings_file), "--params", "{depth: 3}"]
        )
        assert result.exit_code == 2


class TestGrid:
    def test_single_point_grid(self, ratings_file, tmp_path):
        grid_file = tmp_path / "grid.yaml"
        grid_file.write_text("reg_u: [15]\nreg_i: [10]\n", encoding="utf-8")
        target = tmp_path / "grid.json"

        result = runner.invoke(
            app,
            ["grid", "--algo", "baseline-only", "--data", str(ratings_file), "--grid", str(grid_file), "--no-timings", "--out", str(target)],
        )

        assert result.exit_code == 0, result.output
        report = json.loads(target.read_text(encoding="utf-8"))
        assert len(report["trials"]) == 1
        assert report["best"]["assignment"] == {"reg_u": 15, "reg_i": 10}
        assert report["wall_time_s"] is None

    def test_unknown_grid_key(self, ratings_file, tmp_path):
        grid_file = tmp_path / "grid.yaml"
        grid_file.write_text("depth: [1, 2]\n", encoding="utf-8")

        result = runner.invoke(
            app, ["grid", "--algo", "svd", "--data", str(ratings_file), "--grid", str(grid_file)]
        )
        assert result.exit_code == 2


class TestSample:
    def test_same_seed_same_file(self, ratings_file, tmp_path):
        args = ["sample", "--data", str(ratings_file), "--n", "25", "--seed", "4"]
        runner.invoke(app, [*args, "--out", str(tmp_path / "a.tsv")])
        result = runner.invoke(app, [*args, "--out", str(tmp_path / "b.tsv")])

        assert result.exit_code == 0, result.output
        assert "wrote 25 rows" in result.output
        assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()

    def test_full_sample_keeps_every_row(self, ratings_file, small_table, tmp_path):
        target = tmp_path / "all.tsv"
        result = runner.invoke(
            app, ["sample", "--data", str(ratings_file), "--n", str(small_table.n_ratings), "--out", str(target)]
        )

        assert result.exit_code == 0, result.output
        original = ratings_file.read_text(encoding="utf-8").splitlines()
        assert sorted(target.read_text(encoding="utf-8").splitlines()) == sorted(original)

    def test_too_many_rows(self, ratings_file, small_table, tmp_path):
        result = runner.invoke(
            app,
            ["sample", "--data", str(ratings_file), "--n", str(small_table.n_ratings + 1), "--out", str(tmp_path / "x.tsv")],
        )
        assert result.exit_code == 2

    def test_missing_source(self, tmp_path):
        result = runner.invoke(
            app, ["sample", "--data", str(tmp_path / "absent.tsv"), "--n", "1", "--out", str(tmp_path / "x.tsv")]
        )
        assert result.exit_code == 3

    def test_undecodable_source(self, tmp_path):
        source = tmp_path / "latin1.csv"
        source.write_bytes(b"u1;caf\xe9;7\nu2;caf\xe9;3\n")
        args = ["sample", "--data", str(source), "--n", "1", "--out", str(tmp_path / "x.csv")]

        assert runner.invoke(app, args).exit_code == 3
        assert runner.invoke(app, [*args, "--encoding", "latin-1"]).exit_code == 0


def test_benchmark_reports_every_algorithm(ratings_file, tmp_path):
    target = tmp_path / "bench.json"
    result = runner.invoke(
        app,
        ["benchmark", "--data", str(ratings_file), "--algos", "normal-predictor,slope-one", "--cv-folds", "3", "--out", str(target)],
    )

    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text(encoding="utf-8"))
    assert set(report["results"]) == {"NormalPredictor", "SlopeOne"}
    assert report["errors"] == {}

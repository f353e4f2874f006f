"""Tests for hyperparameter spaces and prior sampling."""

import numpy as np
import pytest
from scipy.stats import kstest

from src.errors import InvalidAssignmentError, InvalidSpaceError
from src.models.enums import AlgorithmName, SimilarityKind
from src.search.space import (
    Choice,
    ChoiceOption,
    IntUniform,
    LogUniform,
    ParamSpace,
    Uniform,
    active_params,
    all_names,
    default_space,
    load_space,
    sample,
    validate_assignment,
)


def one(domain) -> ParamSpace:
    return ParamSpace(params={"x": domain})


class TestDomains:
    def test_single_option_choice(self):
        space = one(Choice(options=[ChoiceOption(label="only")]))
        rng = np.random.default_rng(0)
        assert all(sample(space, rng)["x"] == "only" for _ in range(50))

    def test_uniform_bounds_and_mean(self):
        rng = np.random.default_rng(1)
        draws = np.array([sample(one(Uniform(low=0, high=1)), rng)["x"] for _ in range(1000)])

        assert draws.min() >= 0.0 and draws.max() <= 1.0
        assert 0.45 <= draws.mean() <= 0.55

    def test_loguniform_is_uniform_in_log_space(self):
        rng = np.random.default_rng(2)
        space = one(LogUniform(low=1e-4, high=1e-1))
        logs = np.log10([sample(space, rng)["x"] for _ in range(10_000)])

        assert kstest(logs, "uniform", args=(-4, 3)).pvalue > 0.01

    def test_int_uniform_hits_both_ends(self):
        rng = np.random.default_rng(3)
        draws = {sample(one(IntUniform(low=2, high=4)), rng)["x"] for _ in range(200)}
        assert draws == {2, 3, 4}

    def test_bool_labels_stay_apart_from_numbers(self):
        choice = Choice(options=[ChoiceOption(label=True), ChoiceOption(label=1)])
        assert choice.index_of(True) == 0
        assert choice.index_of(1) == 1
        assert not choice.contains(0)

    def test_sampling_is_deterministic(self):
        space = default_space(AlgorithmName.KNN_BASELINE)
        first = sample(space, np.random.default_rng(9))
        second = sample(space, np.random.default_rng(9))
        assert first == second


class TestLoadSpace:
    def test_nested_space_from_plain_data(self):
        space = load_space(
            {
                "params": {
                    "method": {
                        "kind": "choice",
                        "options": [
                            {"label": "a", "space": {"params": {"lr": {"kind": "loguniform", "low": 0.001, "high": 0.1}}}},
                            {"label": "b"},
                        ],
                    },
                    "n": {"kind": "int", "low": 1, "high": 3},
                }
            }
        )
        assert all_names(space) == {"method", "lr", "n"}

    def test_bare_mapping_is_accepted(self):
        space = load_space({"x": {"kind": "uniform", "low": 0, "high": 2}})
        assert isinstance(space.params["x"], Uniform)

    def test_repeated_name_along_path(self):
        with pytest.raises(InvalidSpaceError, match="repeats"):
            load_space(
                {
                    "x": {
                        "kind": "choice",
                        "options": [
                            {"label": 1, "space": {"params": {"x": {"kind": "uniform", "low": 0, "high": 1}}}}
                        ],
                    }
                }
            )

    @pytest.mark.parametrize(
        "domain",
        [
            {"kind": "uniform", "low": 1, "high": 1},
            {"kind": "loguniform", "low": 0, "high": 1},
            {"kind": "int", "low": 5, "high": 2},
            {"kind": "choice", "options": []},
            {"kind": "choice", "options": [{"label": "a"}, {"label": "a"}]},
            {"kind": "normal", "low": 0, "high": 1},
        ],
    )
    def test_invalid_domains(self, domain):
        with pytest.raises(InvalidSpaceError):
            load_space({"x": domain})


class TestAssignments:
    def test_active_path_follows_choice(self):
        space = default_space(AlgorithmName.BASELINE_ONLY)
        rng = np.random.default_rng(4)
        for _ in range(200):
            assignment = sample(space, rng)
            if assignment["method"] == "als":
                assert "reg_u" in assignment and "lr" not in assignment
            else:
                assert "lr" in assignment and "reg_u" not in assignment

    def test_missing_parameter(self):
        with pytest.raises(InvalidAssignmentError, match="missing"):
            validate_assignment(default_space(AlgorithmName.SVD), {"n_factors": 10})

    def test_parameter_off_the_active_path(self):
        assignment = {"method": "sgd", "lr": 0.01, "reg": 0.01, "epochs": 10, "reg_u": 5.0}
        with pytest.raises(InvalidAssignmentError, match="active path"):
            validate_assignment(default_space(AlgorithmName.BASELINE_ONLY), assignment)

    def test_value_outside_domain(self):
        assignment = {"n_factors": 500, "n_epochs": 20, "lr": 0.01, "reg": 0.02}
        with pytest.raises(InvalidAssignmentError, match="outside"):
            validate_assignment(default_space(AlgorithmName.SVD), assignment)

    def test_active_params_of_pearson_baseline(self):
        space = default_space(AlgorithmName.KNN_BASIC)
        names = [name for name, _ in active_params(space, {"sim": "pearson_baseline"})]
        assert "shrinkage" in names


class TestDefaultSpaces:
    @pytest.mark.parametrize("algo", [AlgorithmName.NORMAL_PREDICTOR, AlgorithmName.SLOPE_ONE])
    def test_parameterless_algorithms(self, algo):
        assert default_space(algo).is_empty

    def test_svd_factor_range(self):
        assert default_space("svd").params["n_factors"] == IntUniform(low=2, high=100)

    def test_knn_baseline_samples(self):
        rng = np.random.default_rng(5)
        kinds = {kind.value for kind in SimilarityKind}
        for _ in range(500):
            assignment = sample(default_space(AlgorithmName.KNN_BASELINE), rng)
            assert 10 <= assignment["k"] <= 100
            assert assignment["sim"] in kinds

    @pytest.mark.parametrize("algo", list(AlgorithmName))
    def test_samples_always_validate(self, algo):
        space = default_space(algo)
        rng = np.random.default_rng(6)
        for _ in range(10_000 if algo == AlgorithmName.KNN_BASELINE else 1000):
            validate_assignment(space, sample(space, rng))

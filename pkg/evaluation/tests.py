"""
Test suite for the evaluation app: metrics, recipes, the runner and reports
"""

import io
import json

import jsonschema
import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from benchmarks.specs import SbmSpec
from evaluation.experiments import ExperimentConfig, RealSetting, load_experiment
from evaluation.metrics import accuracy, confusion_matrix, nmi, performance_ratios
from evaluation.report import SCHEMA_TAG, build_report, read_report, write_report
from evaluation.runner import build_instance, load_dataset, plan_tasks, run_experiment, run_task
from mlouvain.exceptions import ConfigurationError, MetricsError
from mlouvain.settings import BASE_DIR
from networks.graph import Partition

FIXTURES = BASE_DIR / "fixtures"

# real-data recipes other than the stand-ins point at datasets that are not shipped
SHIPPED_RECIPES = sorted(
    path.relative_to(BASE_DIR).as_posix()
    for path in (BASE_DIR / "recipes").rglob("*.json")
    if path.parent.name != "real" or path.name.startswith("standin")
)
# SBM and LFR settings, named <kind>_<setting>_<layers>
BENCH_RECIPES = sorted(path.name for path in (BASE_DIR / "recipes").glob("*_*_[0-9]*.json"))


def small_sbm(**overrides):
    recipe = {
        "name": "smoke",
        "kind": "sbm",
        "generator": {"sizes": [15, 15], "p_in": 0.5, "informative_layers": 2},
        "grid": [3.0, 5.0],
        "methods": [{"label": "EVM", "gammas": [0.3, 0.7]}, {"label": "MVM2", "gammas": [0.5]}, {"label": "GL"}],
        "samples": 2,
        "runs": 1,
        "seed": 11,
        "workers": 1,
    }
    recipe.update(overrides)
    return ExperimentConfig.model_validate(recipe)


class TestMetrics:
    def test_accuracy(self):
        truth = [0, 0, 1, 1]
        assert accuracy(truth, truth) == 1.0
        assert accuracy([1, 1, 0, 0], truth) == 1.0
        assert accuracy([0, 1, 1, 1], truth) == 0.75

    def test_accuracy_with_more_predicted_communities(self):
        """Test zero-padding when the partitions differ in community count"""
        assert accuracy([0, 1, 2, 3], [0, 0, 1, 1]) == 0.5
        assert confusion_matrix([0, 1, 2], [0, 0, 0]).shape == (3, 3)

    def test_nmi(self):
        truth = Partition([0, 0, 1, 1, 2, 2])
        assert nmi(truth, truth) == pytest.approx(1.0)
        assert nmi([2, 2, 0, 0, 1, 1], truth) == pytest.approx(1.0)
        assert nmi([0] * 6, truth) == 0.0
        assert nmi([0, 1, 0, 1], [0, 0, 1, 1]) == pytest.approx(0.0, abs=1e-12)
        assert 0.0 <= nmi([0, 0, 1, 1, 1, 2], truth, average="arithmetic") <= 1.0

    def test_size_mismatch(self):
        with pytest.raises(MetricsError):
            accuracy([0, 1], [0, 1, 1])
        with pytest.raises(MetricsError):
            nmi([0, 1], [0, 1], average="max")

    def test_performance_ratios(self):
        one = pd.DataFrame({"method": ["A"], "dataset": ["d"], "accuracy": [0.3], "nmi": [0.2]})
        assert performance_ratios(one)["rho_nmi"].tolist() == [1.0]

        two = pd.DataFrame(
            {
                "method": ["A", "B", "A", "B"],
                "dataset": ["d1", "d1", "d2", "d2"],
                "accuracy": [0.8, 0.4, 0.9, 0.9],
                "nmi": [0.6, 0.3, 0.5, 0.25],
            }
        )
        ratios = performance_ratios(two).set_index("method")
        assert ratios.loc["A", "rho_accuracy"] == pytest.approx(1.0)
        assert ratios.loc["B", "rho_accuracy"] == pytest.approx(0.75)
        assert ratios.loc["B", "rho_nmi"] == pytest.approx(0.5)

    def test_performance_ratios_errors(self):
        missing = pd.DataFrame(
            {"method": ["A", "B", "A"], "dataset": ["d1", "d1", "d2"], "accuracy": [1, 1, 1], "nmi": [1, 1, 1]}
        )
        with pytest.raises(MetricsError):
            performance_ratios(missing)

        zero = pd.DataFrame({"method": ["A"], "dataset": ["d"], "accuracy": [0.0], "nmi": [0.5]})
        with pytest.raises(MetricsError):
            performance_ratios(zero)


class TestExperimentConfig:
    def test_defaults(self):
        config = ExperimentConfig.model_validate(
            {"name": "x", "kind": "lfr", "methods": [{"label": "GL"}]}
        )
        assert config.points == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert config.gammas == (0.1, 0.3, 0.5, 0.7, 0.9)
        assert config.parameter == "mu"
        assert config.default_ordering.value == "community_size"

    def test_noisy_default_ordering(self):
        config = small_sbm(generator={"sizes": [15, 15], "p_in": 0.5, "noisy_layers": 1})
        assert config.noisy
        assert config.default_ordering.value == "random"

    def test_instance_spec(self):
        spec = small_sbm().instance_spec(1, seed=4)
        assert isinstance(spec, SbmSpec)
        assert spec.p_out == pytest.approx(0.1)
        assert spec.seed == 4

    def test_infeasible_grid_fails_before_sampling(self):
        with pytest.raises(ValidationError):
            small_sbm(grid=[0.5])

    def test_invalid_values(self):
        with pytest.raises(ValidationError):
            small_sbm(samples=0)
        with pytest.raises(ValidationError):
            small_sbm(gammas=[0.0, 0.5])
        with pytest.raises(ValidationError):
            small_sbm(methods=[{"label": "MVM"}])

    def test_empty_gamma_grid(self):
        """Test that an empty grid is rejected instead of dropping the gamma methods"""
        with pytest.raises(ValidationError, match="at least 1"):
            small_sbm(gammas=[])
        with pytest.raises(ValidationError, match="must not be empty"):
            small_sbm(methods=[{"label": "EVM", "gammas": []}])
        with pytest.raises(ValidationError):
            small_sbm().with_overrides(gammas=())

    def test_with_overrides(self):
        config = small_sbm().with_overrides(samples=5, seed=None, workers=3)
        assert (config.samples, config.seed, config.workers) == (5, 11, 3)

    def test_method_gamma_grids(self):
        config = small_sbm()
        grids = {spec.label: spec.gamma_values(config.gammas) for spec in config.methods}
        assert grids == {"EVM": (0.3, 0.7), "MVM2": (0.5,), "GL": (None,)}
        assert [spec.h for spec in config.methods] == [1, 2, 1]


class TestLoadExperiment:
    def test_json_and_yaml(self, tmp_path):
        recipe = {"name": "y", "kind": "sbm", "methods": [{"label": "EVM"}], "samples": 3}
        (tmp_path / "r.json").write_text(json.dumps(recipe))
        (tmp_path / "r.yaml").write_text("name: y\nkind: sbm\nmethods:\n  - label: EVM\nsamples: 3\n")

        assert load_experiment(tmp_path / "r.json") == load_experiment(tmp_path / "r.yaml")

    def test_schema_errors(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps({"name": "y", "kind": "sbm", "methods": [{"label": "EVM"}], "color": 1}))
        with pytest.raises(jsonschema.ValidationError):
            load_experiment(path)

        path.write_text(json.dumps({"name": "y", "kind": "sbm", "methods": [{"label": "EVM", "gammas": [1.5]}]}))
        with pytest.raises(jsonschema.ValidationError):
            load_experiment(path)

        path.write_text(json.dumps({"name": "y", "kind": "sbm", "methods": [{"label": "EVM"}], "gammas": []}))
        with pytest.raises(jsonschema.ValidationError):
            load_experiment(path)

    def test_unparsable_file(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text("{")
        with pytest.raises(ConfigurationError):
            load_experiment(path)

    def test_missing_dataset_directory(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(
            json.dumps({"name": "y", "kind": "real", "generator": {"datasets": ["nope"]}, "methods": [{"label": "GL"}]})
        )
        with pytest.raises(ConfigurationError, match="nope"):
            load_experiment(path)

    @pytest.mark.parametrize("recipe", BENCH_RECIPES)
    def test_every_benchmark_setting_has_a_gamma_recipe(self, recipe):
        """Test that each SBM and LFR setting has a gamma sweep over the same instances"""
        bench = load_experiment(BASE_DIR / "recipes" / recipe)
        sweep = load_experiment(BASE_DIR / "recipes" / "gamma" / recipe)

        assert (sweep.kind, sweep.generator, sweep.grid) == (bench.kind, bench.generator, bench.grid)
        assert not sweep.best_gamma
        assert all(spec.gamma_values(sweep.gammas) != (None,) for spec in sweep.methods)

    @pytest.mark.parametrize("recipe", SHIPPED_RECIPES)
    def test_shipped_recipes_load(self, recipe):
        config = load_experiment(BASE_DIR / recipe)
        assert config.methods


class TestRunner:
    def test_sample_seeds_do_not_depend_on_scheduling(self):
        config = small_sbm()
        first = build_instance(config, 1, 1)
        again = build_instance(config, 1, 1)
        other = build_instance(config, 1, 0)

        assert first[0] == again[0]
        assert first[2] == again[2] != other[2]

    def test_rows_per_task(self):
        config = small_sbm()
        tasks = plan_tasks(config)
        rows = run_task(tasks[0])

        assert len(tasks) == 4
        # EVM x 2 gammas, MVM2 x 1, GL x 1
        assert len(rows) == 4
        assert {row.run_seed for row in rows} == {rows[0].run_seed}
        for row in rows:
            assert 0.0 <= row.accuracy <= 1.0
            assert 0.0 <= row.nmi <= 1.0
            assert len(row.q.split(";")) == 2

    def test_parallel_rows_match_serial(self):
        config = small_sbm()
        serial = build_report(run_experiment(config))
        parallel = build_report(run_experiment(config.with_overrides(workers=3)))

        pd.testing.assert_frame_equal(serial, parallel)

    def test_load_dataset(self):
        dataset = load_dataset(FIXTURES / "standin_b", knn=5)

        assert dataset.name == "standin_b"
        assert dataset.graph.k == 2
        assert dataset.truth.n == 24

    def test_load_dataset_without_truth(self, tmp_path):
        with pytest.raises(MetricsError):
            load_dataset(tmp_path)

    def test_real_settings_layer_counts(self):
        dataset = load_dataset(FIXTURES / "standin_a")
        base = {
            "name": "r",
            "kind": "real",
            "methods": [{"label": "GL"}],
            "grid": [0.03],
            "samples": 1,
        }
        counts = {}
        for setting in RealSetting:
            config = ExperimentConfig.model_validate(
                {**base, "generator": {"datasets": [str(FIXTURES / "standin_a")], "setting": setting.value}}
            )
            graph, truth, _ = build_instance(config, 0, 0, dataset)
            counts[setting] = graph.k
            assert truth == dataset.truth
        assert counts == {
            RealSetting.INFORMATIVE: 2,
            RealSetting.PLUS_NOISE: 3,
            RealSetting.FLATTEN_PLUS_NOISE: 2,
        }


class TestReport:
    def test_aggregates_are_means(self):
        config = small_sbm()
        frame = build_report(run_experiment(config))
        runs = frame[frame["kind"] == "run"]
        aggregates = frame[frame["kind"] == "aggregate"]

        # 2 points x 2 samples x (2 + 1 + 1) method configurations
        assert len(runs) == 16
        assert len(aggregates) == 8
        for _, row in aggregates.iterrows():
            cell = runs[
                (runs["param_value"] == row["param_value"])
                & (runs["method"] == row["method"])
                & ((runs["gamma"] == row["gamma"]) | (runs["gamma"].isna() & pd.isna(row["gamma"])))
            ]
            assert len(cell) == 2
            assert abs(cell["nmi"].mean() - row["nmi"]) <= 1e-12
            assert abs(cell["accuracy"].mean() - row["accuracy"]) <= 1e-12

    def test_best_gamma_rows(self):
        frame = build_report(run_experiment(small_sbm()))
        best = frame[frame["kind"] == "best"]
        aggregates = frame[frame["kind"] == "aggregate"]

        # one row per (point, method)
        assert len(best) == 6
        evm = aggregates[aggregates["method"] == "EVM"]
        for point, group in evm.groupby("param_value"):
            chosen = best[(best["method"] == "EVM") & (best["param_value"] == point)]
            assert chosen["nmi"].iloc[0] == group["nmi"].max()

    def test_write_and_read(self, tmp_path):
        frame = build_report(run_experiment(small_sbm(samples=1, grid=[3.0])))
        buffer = io.StringIO()
        write_report(frame, buffer)
        write_report(frame, tmp_path / "out" / "r.csv")

        text = buffer.getvalue()
        assert text.startswith(f"# schema={SCHEMA_TAG}\n")
        assert (tmp_path / "out" / "r.csv").read_text() == text
        loaded = read_report(tmp_path / "out" / "r.csv")
        assert loaded["kind"].iloc[0] == "run"
        assert loaded["sample_seed"].dtype == np.int64 or loaded["sample_seed"].isna().any()

    def test_ratio_rows(self):
        config = ExperimentConfig.model_validate(
            {
                "name": "r",
                "kind": "real",
                "generator": {
                    "datasets": [str(FIXTURES / "standin_a"), str(FIXTURES / "standin_b")],
                    "knn": 5,
                },
                "methods": [{"label": "EVM", "gammas": [0.5]}, {"label": "GL"}],
                "samples": 1,
            }
        )
        frame = build_report(run_experiment(config), ratios=True)
        ratios = frame[frame["kind"] == "ratio"]

        assert sorted(ratios["method"]) == ["EVM", "GL"]
        assert (ratios["dataset"] == "*").all()
        assert ((ratios["nmi"] > 0) & (ratios["nmi"] <= 1.0)).all()


def best_nmi(config):
    """Mean NMI of each method at its best gamma, on a single-point grid."""
    frame = build_report(run_experiment(config))
    return frame[frame["kind"] == "best"].set_index("method")["nmi"]


@pytest.mark.slow
class TestBenchmarkScale:
    """Scaled benchmark reproductions on the full-size generators"""

    def test_informative_sbm_at_ratio_three(self):
        config = ExperimentConfig.model_validate(
            {
                "name": "sbm-informative",
                "kind": "sbm",
                "grid": [3.0],
                "methods": [{"label": "MVM2"}],
                "samples": 10,
                "workers": 4,
            }
        )
        assert best_nmi(config)["MVM2"] >= 0.90

    def test_noisy_sbm_favors_plus_variance(self):
        config = ExperimentConfig.model_validate(
            {
                "name": "sbm-noisy",
                "kind": "sbm",
                "generator": {"noisy_layers": 2},
                "grid": [3.5],
                "methods": [{"label": "MVP2", "gammas": [0.9]}, {"label": "MA2"}],
                "samples": 10,
                "workers": 4,
            }
        )
        frame = build_report(run_experiment(config))
        means = frame[frame["kind"] == "aggregate"].set_index("method")["nmi"]

        assert means["MVP2"] >= means["MA2"]
        assert means["MVP2"] >= 0.80

    def test_lfr_low_mixing(self):
        config = ExperimentConfig.model_validate(
            {
                "name": "lfr-informative",
                "kind": "lfr",
                "grid": [0.1],
                "methods": [{"label": "EVM"}, {"label": "MVM2"}],
                "samples": 10,
                "workers": 4,
            }
        )
        scores = best_nmi(config)
        assert scores["EVM"] >= 0.90
        assert scores["MVM2"] >= 0.90

"""
Test suite for the management commands
"""

import io
import json
import tempfile
from pathlib import Path

import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from evaluation.management.commands.run import Command as RunCommand
from evaluation.runner import LAYERS_FILE, TRUTH_FILE
from mlouvain.settings import BASE_DIR
from networks.io import load_multiplex, load_partition

FIXTURES = BASE_DIR / "fixtures"
TWO_TRIANGLES = FIXTURES / "two_triangles.edges"
TWO_TRIANGLES_TRUTH = FIXTURES / "two_triangles_truth.txt"

TINY_RECIPE = {
    "name": "tiny",
    "kind": "sbm",
    "generator": {"sizes": [12, 12], "p_in": 0.6, "informative_layers": 2},
    "grid": [3.0, 6.0],
    "methods": [{"label": "EVM", "gammas": [0.3, 0.7]}, {"label": "MVM2"}, {"label": "GL"}],
    "gammas": [0.5],
    "samples": 2,
    "seed": 5,
}


def call(*args):
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def parse(text):
    return pd.read_csv(io.StringIO(text), comment="#")


class CommandTestCase(SimpleTestCase):
    """Each test gets a scratch directory"""

    def setUp(self):
        scratch = tempfile.TemporaryDirectory()
        self.addCleanup(scratch.cleanup)
        self.tmp = Path(scratch.name)

    def write_recipe(self, **overrides):
        path = self.tmp / "tiny.json"
        path.write_text(json.dumps({**TINY_RECIPE, **overrides}))
        return str(path)


class RunCommandTestCase(CommandTestCase):
    def test_two_triangles(self):
        """Test the printed row of a plain run"""
        text = call("run", str(TWO_TRIANGLES))
        frame = parse(text)

        self.assertTrue(text.startswith("# schema=mlouvain-results/1\n"))
        self.assertEqual(len(frame), 1)
        row = frame.iloc[0]
        self.assertEqual(row["dataset"], "two_triangles")
        self.assertEqual(row["method"], "GL")
        self.assertAlmostEqual(float(row["q"]), 10 / 28, places=12)
        self.assertEqual(row["communities"], 2)
        self.assertTrue(pd.isna(row["accuracy"]))

    def test_scores_against_truth(self):
        labels = self.tmp / "labels.txt"
        frame = parse(
            call(
                "run",
                str(TWO_TRIANGLES),
                "--truth",
                str(TWO_TRIANGLES_TRUTH),
                "--method",
                "EVM",
                "--gamma",
                "0.5",
                "--partition",
                str(labels),
            )
        )

        self.assertEqual(frame["accuracy"].iloc[0], 1.0)
        self.assertAlmostEqual(frame["nmi"].iloc[0], 1.0)
        self.assertEqual(load_partition(labels), load_partition(TWO_TRIANGLES_TRUTH))

    def test_list_length_from_label(self):
        frame = parse(call("run", str(TWO_TRIANGLES), "--method", "MVM2", "--gamma", "0.9"))
        self.assertEqual(frame["h"].iloc[0], 2)

    def test_contradicting_list_length(self):
        with self.assertRaisesMessage(CommandError, "CONFIGURATION_ERROR") as error:
            call("run", str(TWO_TRIANGLES), "--method", "MVM2", "--h", "3", "--gamma", "0.5")
        self.assertEqual(error.exception.returncode, 2)

    def test_missing_gamma(self):
        with self.assertRaises(CommandError) as error:
            call("run", str(TWO_TRIANGLES), "--method", "EVM")
        self.assertEqual(error.exception.returncode, 2)


class ExitCodeTestCase(CommandTestCase):
    """Exit status of commands started from the command line"""

    def run_from_argv(self, *args):
        stderr = io.StringIO()
        with self.assertRaises(SystemExit) as error:
            RunCommand(stdout=io.StringIO(), stderr=stderr).run_from_argv(["manage.py", "run", *args])
        return error.exception.code, stderr.getvalue()

    def test_usage_error_exits_with_one(self):
        code, _ = self.run_from_argv(str(TWO_TRIANGLES), "--ordering", "backwards")
        self.assertEqual(code, 1)

    def test_missing_file_exits_with_two(self):
        code, err = self.run_from_argv(str(self.tmp / "absent.edges"))
        self.assertEqual(code, 2)
        self.assertIn("absent.edges", err)

    def test_malformed_file_exits_with_two(self):
        path = self.tmp / "bad.edges"
        path.write_text("0 0 1\n0 1\n")
        code, err = self.run_from_argv(str(path))
        self.assertEqual(code, 2)
        self.assertIn("GRAPH_FORMAT_ERROR", err)

    def test_bad_node_directive_exits_with_two(self):
        path = self.tmp / "bad_nodes.edges"
        path.write_text("# nodes=abc\n0 0 1\n")
        code, err = self.run_from_argv(str(path))
        self.assertEqual(code, 2)
        self.assertIn("GRAPH_FORMAT_ERROR", err)


class BenchSbmTestCase(CommandTestCase):
    def test_report_is_reproducible(self):
        """Test byte-identical reports across repeats and worker counts"""
        recipe = self.write_recipe()
        first, second, parallel = (self.tmp / name for name in ("a.csv", "b.csv", "c.csv"))

        call("bench_sbm", recipe, "--output", str(first))
        call("bench_sbm", recipe, "--output", str(second))
        call("bench_sbm", recipe, "--output", str(parallel), "--workers", "2")

        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(first.read_bytes(), parallel.read_bytes())

    def test_report_rows(self):
        frame = parse(call("bench_sbm", self.write_recipe(), "--output", "-"))
        counts = frame["kind"].value_counts()

        # 2 points x 2 samples x (EVM 2 gammas + MVM2 1 gamma + GL)
        self.assertEqual(counts["run"], 16)
        self.assertEqual(counts["aggregate"], 8)
        self.assertEqual(counts["best"], 6)
        self.assertEqual(set(frame["param_name"]), {"p_ratio"})

    def test_seed_override_changes_instances(self):
        recipe = self.write_recipe(samples=1)
        default = parse(call("bench_sbm", recipe, "--output", "-"))
        other = parse(call("bench_sbm", recipe, "--output", "-", "--seed", "6"))

        self.assertNotEqual(set(default["sample_seed"].dropna()), set(other["sample_seed"].dropna()))

    def test_recipe_of_another_kind(self):
        with self.assertRaisesMessage(CommandError, "expected lfr"):
            call("bench_lfr", self.write_recipe(), "--output", "-")

    def test_schema_error(self):
        with self.assertRaisesMessage(CommandError, "RECIPE_SCHEMA_ERROR") as error:
            call("bench_sbm", self.write_recipe(colour="red"), "--output", "-")
        self.assertEqual(error.exception.returncode, 2)

    def test_infeasible_grid(self):
        with self.assertRaisesMessage(CommandError, "CONFIGURATION_ERROR"):
            call("bench_sbm", self.write_recipe(grid=[0.5]), "--output", "-")

    def test_empty_gamma_grid(self):
        with self.assertRaisesMessage(CommandError, "RECIPE_SCHEMA_ERROR") as error:
            call("bench_sbm", self.write_recipe(gammas=[]), "--output", "-")
        self.assertEqual(error.exception.returncode, 2)


class GammaSweepTestCase(CommandTestCase):
    def test_empty_gamma_grid(self):
        with self.assertRaisesMessage(CommandError, "RECIPE_SCHEMA_ERROR") as error:
            call("gamma_sweep", self.write_recipe(gammas=[]), "--output", "-")
        self.assertEqual(error.exception.returncode, 2)

    def test_keeps_gamma_methods_only(self):
        frame = parse(call("gamma_sweep", self.write_recipe(), "--output", "-"))

        self.assertEqual(set(frame["method"]), {"EVM", "MVM2"})
        self.assertNotIn("best", set(frame["kind"]))
        # 2 points x (2 + 1) gammas
        self.assertEqual((frame["kind"] == "aggregate").sum(), 6)

    def test_gamma_override(self):
        recipe = self.write_recipe(methods=[{"label": "EVM"}], samples=1)
        frame = parse(call("gamma_sweep", recipe, "--output", "-", "--gammas", "0.2", "0.4", "0.6"))

        self.assertEqual(sorted(frame["gamma"].unique()), [0.2, 0.4, 0.6])

    def test_no_gamma_method(self):
        with self.assertRaisesMessage(CommandError, "no method"):
            call("gamma_sweep", self.write_recipe(methods=[{"label": "GL"}]), "--output", "-")


class RealTestCase(CommandTestCase):
    def test_informative_datasets(self):
        frame = parse(
            call(
                "real",
                str(FIXTURES / "standin_a"),
                str(FIXTURES / "standin_b"),
                "--knn",
                "5",
                "--methods",
                "EVM",
                "GL",
                "--gammas",
                "0.5",
                "--output",
                "-",
            )
        )
        runs = frame[frame["kind"] == "run"]
        ratios = frame[frame["kind"] == "ratio"]

        self.assertEqual(set(runs["dataset"]), {"standin_a", "standin_b"})
        self.assertEqual(sorted(ratios["method"]), ["EVM", "GL"])
        self.assertTrue(((ratios["nmi"] > 0) & (ratios["nmi"] <= 1)).all())

    def test_noise_settings_layer_counts(self):
        """Test one noise layer on top of the dataset layers, or of their flattening"""
        for recipe, layers in (("standin_plus_noise.json", 3), ("standin_flatten_plus_noise.json", 2)):
            with self.subTest(recipe=recipe):
                frame = parse(
                    call(
                        "real",
                        "--config",
                        str(BASE_DIR / "recipes" / "real" / recipe),
                        "--methods",
                        "GL",
                        "--samples",
                        "1",
                        "--runs",
                        "1",
                        "--output",
                        "-",
                    )
                )
                runs = frame[frame["kind"] == "run"]

                self.assertEqual(len(runs), 2)
                self.assertTrue(all(len(str(q).split(";")) == layers for q in runs["q"]))
                self.assertEqual(set(runs["param_value"]), {0.03})

    def test_needs_datasets_or_recipe(self):
        with self.assertRaisesMessage(CommandError, "dataset directories"):
            call("real", "--output", "-")

    def test_missing_dataset_directory(self):
        with self.assertRaisesMessage(CommandError, "not found"):
            call("real", str(self.tmp / "absent"), "--output", "-")


class MetricsTestCase(CommandTestCase):
    def test_partition_against_truth(self):
        pred = self.tmp / "pred.txt"
        pred.write_text("0\n1\n1\n1\n")
        truth = self.tmp / "truth.txt"
        truth.write_text("0\n0\n1\n1\n")

        frame = parse(call("metrics", "--partition", str(pred), "--truth", str(truth)))

        self.assertEqual(frame["accuracy"].iloc[0], 0.75)

    def test_performance_ratios(self):
        scores = self.tmp / "scores.csv"
        pd.DataFrame(
            {
                "method": ["A", "B", "A", "B"],
                "dataset": ["d1", "d1", "d2", "d2"],
                "accuracy": [0.8, 0.4, 0.5, 0.5],
                "nmi": [0.8, 0.4, 0.5, 0.5],
            }
        ).to_csv(scores, index=False)

        frame = parse(call("metrics", "--scores", str(scores))).set_index("method")

        self.assertAlmostEqual(frame.loc["A", "rho_nmi"], 1.0)
        self.assertAlmostEqual(frame.loc["B", "rho_accuracy"], 0.75)

    def test_conflicting_options(self):
        with self.assertRaisesMessage(CommandError, "excludes"):
            call("metrics", "--scores", "x.csv", "--truth", str(TWO_TRIANGLES_TRUTH))
        with self.assertRaisesMessage(CommandError, "--partition and --truth"):
            call("metrics", "--truth", str(TWO_TRIANGLES_TRUTH))

    def test_size_mismatch(self):
        pred = self.tmp / "pred.txt"
        pred.write_text("0\n1\n")
        with self.assertRaises(CommandError) as error:
            call("metrics", "--partition", str(pred), "--truth", str(TWO_TRIANGLES_TRUTH))
        self.assertEqual(error.exception.returncode, 2)


class GenerateTestCase(CommandTestCase):
    def test_sbm_directory(self):
        target = self.tmp / "sbm"
        call("generate", "sbm", str(target), "--sizes", "10", "10", "--p-in", "0.5", "--noisy-layers", "1")

        graph = load_multiplex(target / LAYERS_FILE)
        truth = load_partition(target / TRUTH_FILE, num_nodes=graph.n)
        self.assertEqual(graph.k, 3)
        self.assertEqual(truth.num_communities, 2)

    def test_generated_directory_runs_as_real_dataset(self):
        target = self.tmp / "lfr"
        call(
            "generate", "lfr", str(target), "--n", "60", "--community-sizes", "30", "30",
            "--avg-degree", "8", "--max-degree", "12", "--mu", "0.1", "--seed", "3",
        )
        frame = parse(call("real", str(target), "--methods", "GL", "--output", "-"))

        self.assertTrue((frame[frame["kind"] == "run"]["nmi"] > 0.5).all())

    def test_er_directory_has_no_truth(self):
        call("generate", "er", str(self.tmp), "--n", "30", "--p", "0.2", "--layers", "3")

        self.assertEqual(load_multiplex(self.tmp / LAYERS_FILE).k, 3)
        self.assertFalse((self.tmp / TRUTH_FILE).exists())

    def test_ratio_below_one(self):
        with self.assertRaisesMessage(CommandError, "--ratio") as error:
            call("generate", "sbm", str(self.tmp), "--ratio", "0.5")
        self.assertEqual(error.exception.returncode, 2)

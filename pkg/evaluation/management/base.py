# evaluation/management/base.py
# Shared command plumbing: exit codes, recipe loading and report output

from pathlib import Path

import jsonschema
import pydantic
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from clustering.config import Ordering
from evaluation.experiments import ExperimentConfig, ExperimentKind, load_experiment
from evaluation.report import build_report, write_report
from evaluation.runner import run_experiment
from mlouvain.exceptions import ConfigurationError, MultiplexError

USAGE_ERROR = 1
DATA_ERROR = 2


def error_code(error: Exception) -> str:
    if isinstance(error, MultiplexError):
        return error.code
    if isinstance(error, jsonschema.ValidationError):
        return "RECIPE_SCHEMA_ERROR"
    if isinstance(error, pydantic.ValidationError):
        return "CONFIGURATION_ERROR"
    return "IO_ERROR"


class MultiplexCommand(BaseCommand):
    """Base command: argparse errors exit with 1, data errors with 2."""

    data_errors = (MultiplexError, OSError, jsonschema.ValidationError, pydantic.ValidationError)
    # no models, urls or templates to check
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        argparse_exit = parser.exit

        def exit(status=0, message=None):
            argparse_exit(USAGE_ERROR if status == 2 else status, message)

        parser.exit = exit
        return parser

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except self.data_errors as e:
            message = e.message if isinstance(e, jsonschema.ValidationError) else str(e)
            raise CommandError(f"{error_code(e)}: {message}", returncode=DATA_ERROR) from e

    def write_csv(self, frame, output):
        if output in (None, "-"):
            write_report(frame, self.stdout)
        else:
            write_report(frame, output)
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(frame)} row(s) to {output}"))


class ExperimentCommand(MultiplexCommand):
    """Runs a recipe of one kind and writes its CSV report."""

    kind: ExperimentKind = None
    best_gamma = True
    ratios = False

    def add_arguments(self, parser):
        parser.add_argument("config", help="Experiment recipe (JSON, or YAML by suffix)")
        self.add_run_options(parser)

    def add_run_options(self, parser):
        parser.add_argument("--output", help="CSV path, '-' for standard output")
        parser.add_argument("--workers", type=int, help="Worker processes")
        parser.add_argument("--seed", type=int, help="Global seed")
        parser.add_argument("--samples", type=int, help="Instances per grid point")
        parser.add_argument("--runs", type=int, help="Runs per instance")
        parser.add_argument(
            "--gammas", type=float, nargs="+", help="Gamma grid for methods that take one"
        )
        parser.add_argument(
            "--nmi-average", choices=["geometric", "arithmetic"], help="NMI normalization"
        )
        parser.add_argument(
            "--record-timings", action="store_true", default=None, help="Fill the wall_ms column"
        )

    def overrides(self, options) -> dict:
        return {
            "workers": options.get("workers"),
            "seed": options.get("seed"),
            "samples": options.get("samples"),
            "runs": options.get("runs"),
            "gammas": options.get("gammas"),
            "nmi_average": options.get("nmi_average"),
            "record_timings": options.get("record_timings"),
        }

    def load_config(self, options) -> ExperimentConfig:
        config = load_experiment(options["config"]).with_overrides(**self.overrides(options))
        if config.kind is not self.kind:
            raise ConfigurationError(
                f"{options['config']} is a {config.kind.value} recipe, expected {self.kind.value}"
            )
        return config

    def prepare(self, config: ExperimentConfig) -> ExperimentConfig:
        return config

    def output_path(self, config: ExperimentConfig, options):
        if options.get("output"):
            return options["output"]
        if config.output:
            return config.output
        return str(Path(settings.EXPERIMENT_OUTPUT_DIR) / f"{config.name}.csv")

    def handle(self, *args, **options):
        config = self.prepare(self.load_config(options))
        rows = run_experiment(config)
        frame = build_report(rows, best=self.best_gamma and config.best_gamma, ratios=self.ratios)
        self.write_csv(frame, self.output_path(config, options))


def ordering_choices():
    return [ordering.value for ordering in Ordering]

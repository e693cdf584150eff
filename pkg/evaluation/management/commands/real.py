# evaluation/management/commands/real.py
# Real-data settings: informative layers, plus noise, flattened plus noise

from pathlib import Path

from evaluation.experiments import (
    INFORMATIVE_METHODS,
    NOISY_METHODS,
    ExperimentConfig,
    ExperimentKind,
    RealSetting,
    load_experiment,
)
from evaluation.management.base import ExperimentCommand
from mlouvain.exceptions import ConfigurationError


class Command(ExperimentCommand):
    help = (
        "Score the methods on dataset directories (layers.edges and/or features*.csv plus "
        "truth.txt) and append performance ratios"
    )

    kind = ExperimentKind.REAL
    ratios = True

    def add_arguments(self, parser):
        parser.add_argument("datasets", nargs="*", help="Dataset directories")
        parser.add_argument("--config", help="Real-data recipe; positional datasets replace its list")
        parser.add_argument(
            "--setting",
            choices=[setting.value for setting in RealSetting],
            help="Layer setting (default: informative)",
        )
        parser.add_argument(
            "--noise-p", type=float, nargs="+", help="Edge probabilities of the noise layer"
        )
        parser.add_argument("--knn", type=int, help="Neighbors per node in feature layers")
        parser.add_argument("--methods", nargs="+", help="Method labels, e.g. EVM MVM2 GL")
        self.add_run_options(parser)

    def load_config(self, options) -> ExperimentConfig:
        datasets = []
        for dataset in options.get("datasets") or ():
            location = Path(dataset).resolve()
            if not location.is_dir():
                raise ConfigurationError(f"dataset directory {dataset} not found")
            datasets.append(str(location))

        generator = {
            key: value
            for key, value in (
                ("datasets", datasets or None),
                ("setting", options.get("setting")),
                ("knn", options.get("knn")),
            )
            if value is not None
        }
        methods = options.get("methods")
        updates = {
            **self.overrides(options),
            "grid": options.get("noise_p"),
            "methods": [{"label": label} for label in methods] if methods else None,
        }

        if options.get("config"):
            config = load_experiment(options["config"])
            if config.kind is not self.kind:
                raise ConfigurationError(f"{options['config']} is not a real-data recipe")
            return config.with_overrides(generator=generator or None, **updates)

        if not datasets:
            raise ConfigurationError("give dataset directories or --config")
        setting = RealSetting(generator.get("setting", RealSetting.INFORMATIVE.value))
        informative = setting is RealSetting.INFORMATIVE
        base = ExperimentConfig.model_validate(
            {
                "name": f"real-{setting.value}",
                "kind": self.kind.value,
                "generator": generator,
                "methods": [
                    {"label": label}
                    for label in (INFORMATIVE_METHODS if informative else NOISY_METHODS)
                ],
                "samples": 1 if informative else 10,
                "runs": 1 if informative else 10,
            }
        )
        return base.with_overrides(**updates)

# evaluation/management/commands/gamma_sweep.py
# Gamma x instance-grid sweep for the variance methods

from evaluation.experiments import ExperimentConfig, load_experiment
from evaluation.management.base import ExperimentCommand
from mlouvain.exceptions import ConfigurationError


class Command(ExperimentCommand):
    help = (
        "Cross the gamma grid with a recipe's instance grid for EVM/EVP/MVM/MVP; "
        "aggregate rows pivot into one heatmap per method"
    )

    best_gamma = False

    def load_config(self, options) -> ExperimentConfig:
        return load_experiment(options["config"]).with_overrides(**self.overrides(options))

    def prepare(self, config: ExperimentConfig) -> ExperimentConfig:
        methods = [spec for spec in config.methods if spec.gamma_values(config.gammas) != (None,)]
        if not methods:
            raise ConfigurationError(f"{config.name}: no method in the recipe takes gamma")
        for spec in methods:
            if not spec.gamma_values(config.gammas):
                raise ConfigurationError(f"{config.name}: empty gamma grid for {spec.label}")
        return config.with_overrides(
            methods=[spec.model_dump(mode="json") for spec in methods], best_gamma=False
        )

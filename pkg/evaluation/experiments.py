# evaluation/experiments.py
# Experiment recipes: validated configuration and file loading

import json
import logging
from enum import Enum
from pathlib import Path

import jsonschema
import yaml
from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from benchmarks.specs import LfrSpec, SbmSpec
from clustering.config import SEED_MAX, Ordering
from clustering.presets import Method, parse_method, uses_gamma
from mlouvain.exceptions import ConfigurationError, MultiplexError
from mlouvain.instrumentation import log_call

from .metrics import NMI_AVERAGES
from .schemas import EXPERIMENT_SCHEMA

logger = logging.getLogger(__name__)


class ExperimentKind(str, Enum):
    SBM = "sbm"
    LFR = "lfr"
    REAL = "real"


class RealSetting(str, Enum):
    INFORMATIVE = "informative"
    PLUS_NOISE = "plus-noise"
    FLATTEN_PLUS_NOISE = "flatten-plus-noise"


DEFAULT_GRIDS = {
    ExperimentKind.SBM: (2.0, 2.3, 2.5, 2.8, 3.0),
    ExperimentKind.LFR: (0.1, 0.2, 0.3, 0.4, 0.5, 0.6),
    ExperimentKind.REAL: (0.01, 0.03, 0.05),
}

# column name of the swept instance parameter
GRID_PARAMETERS = {
    ExperimentKind.SBM: "p_ratio",
    ExperimentKind.LFR: "mu",
    ExperimentKind.REAL: "noise_p",
}

INFORMATIVE_METHODS = ("EVM", "MVM2", "MVM3", "MA2", "MA3", "GL")
NOISY_METHODS = ("EVP", "MVP2", "MVP3", "MA2", "MA3", "GL")


def default_gammas() -> tuple[float, ...]:
    return tuple(getattr(settings, "GAMMA_GRID", (0.1, 0.3, 0.5, 0.7, 0.9)))


class MethodSpec(BaseModel):
    """One method label (``"MVM2"``, ``"GL"``, ...) with its own gamma grid and ordering."""

    model_config = ConfigDict(frozen=True)

    label: str
    gammas: tuple[float, ...] | None = None
    ordering: Ordering | None = None

    @field_validator("label")
    @classmethod
    def _label(cls, label):
        try:
            method, h = parse_method(label)
        except ConfigurationError as e:
            raise ValueError(str(e)) from e
        if method in (Method.MA, Method.MVM, Method.MVP) and h is None:
            raise ValueError(f"{label} needs a list length, e.g. {label}2")
        return label.strip().upper()

    @field_validator("gammas")
    @classmethod
    def _gammas(cls, gammas):
        if gammas is not None and not gammas:
            raise ValueError("gamma grid must not be empty")
        if gammas is not None and not all(0.0 < g < 1.0 for g in gammas):
            raise ValueError(f"gamma values must lie in (0, 1), got {list(gammas)}")
        return gammas

    @property
    def method(self) -> Method:
        return parse_method(self.label)[0]

    @property
    def h(self) -> int:
        return parse_method(self.label)[1] or 1

    def gamma_values(self, default: tuple[float, ...]) -> tuple:
        if not uses_gamma(self.method):
            return (None,)
        return self.gammas or default


class SbmGenerator(BaseModel):
    model_config = ConfigDict(frozen=True)

    sizes: tuple[int, ...] = (125, 125, 125, 125)
    p_in: float = 0.1
    informative_layers: int = 2
    noisy_layers: int = 0
    p_noise: float = 0.1


class LfrGenerator(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = 128
    community_sizes: tuple[int, ...] = (32, 32, 32, 32)
    avg_degree: float = 16.0
    max_degree: int = 32
    degree_exponent: float = 2.0
    informative_layers: int = Field(default=2, ge=1)
    noisy_layers: int = 0


class RealGenerator(BaseModel):
    model_config = ConfigDict(frozen=True)

    datasets: tuple[str, ...]
    setting: RealSetting = RealSetting.INFORMATIVE
    knn: int | None = None


GENERATORS = {
    ExperimentKind.SBM: SbmGenerator,
    ExperimentKind.LFR: LfrGenerator,
    ExperimentKind.REAL: RealGenerator,
}


class ExperimentConfig(BaseModel):
    """A sweep over instance parameters, samples, methods, gammas and runs.

    ``grid`` holds p/q ratios for SBM, mixing parameters for LFR and noise
    probabilities for real data. Every ``(grid point, sample)`` pair is one
    instance; every method, gamma and run is evaluated on it.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    kind: ExperimentKind
    generator: SbmGenerator | LfrGenerator | RealGenerator
    grid: tuple[float, ...] = ()
    methods: tuple[MethodSpec, ...]
    gammas: tuple[float, ...] = Field(default_factory=default_gammas, min_length=1)
    samples: int = Field(default=10, ge=1)
    runs: int = Field(default=1, ge=1)
    seed: int = Field(
        default_factory=lambda: getattr(settings, "EXPERIMENT_SEED", 2023), ge=0, le=SEED_MAX
    )
    workers: int = Field(default_factory=lambda: getattr(settings, "EXPERIMENT_WORKERS", 1), ge=1)
    output: str | None = None
    nmi_average: str = "geometric"
    record_timings: bool = False
    best_gamma: bool = True

    @model_validator(mode="before")
    @classmethod
    def _typed_generator(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            kind = ExperimentKind(data.get("kind"))
            generator = data.get("generator") or {}
            if isinstance(generator, dict):
                data["generator"] = GENERATORS[kind](**generator)
            if not data.get("grid"):
                data["grid"] = DEFAULT_GRIDS[kind]
        return data

    @field_validator("gammas")
    @classmethod
    def _gammas(cls, gammas):
        if not all(0.0 < g < 1.0 for g in gammas):
            raise ValueError(f"gamma values must lie in (0, 1), got {list(gammas)}")
        return gammas

    @field_validator("nmi_average")
    @classmethod
    def _nmi_average(cls, average):
        if average not in NMI_AVERAGES:
            raise ValueError(f"nmi_average must be one of {NMI_AVERAGES}")
        return average

    @model_validator(mode="after")
    def _feasible(self):
        if not isinstance(self.generator, GENERATORS[self.kind]):
            raise ValueError(f"generator does not match kind {self.kind.value}")
        try:
            for index in range(len(self.points)):
                self.instance_spec(index)
        except (ValidationError, MultiplexError) as e:
            raise ValueError(f"infeasible instance: {e}") from e
        return self

    @property
    def parameter(self) -> str:
        return GRID_PARAMETERS[self.kind]

    @property
    def points(self) -> tuple[float, ...]:
        if self.kind is ExperimentKind.REAL and self.generator.setting is RealSetting.INFORMATIVE:
            return (0.0,)
        return self.grid

    @property
    def noisy(self) -> bool:
        if self.kind is ExperimentKind.REAL:
            return self.generator.setting is not RealSetting.INFORMATIVE
        return self.generator.noisy_layers > 0

    @property
    def default_ordering(self) -> Ordering:
        return Ordering.RANDOM if self.noisy else Ordering.COMMUNITY_SIZE

    def instance_spec(self, point: int, seed: int = 0):
        """Generator spec of grid point ``point``, or ``None`` for real data."""
        value = self.points[point]
        gen = self.generator
        if self.kind is ExperimentKind.SBM:
            if value < 1.0:
                raise ConfigurationError(f"p/q ratio {value} puts p_out above p_in")
            return SbmSpec(
                sizes=gen.sizes,
                p_in=gen.p_in,
                p_out=gen.p_in / value,
                informative_layers=gen.informative_layers,
                noisy_layers=gen.noisy_layers,
                p_noise=gen.p_noise,
                seed=seed,
            )
        if self.kind is ExperimentKind.LFR:
            return LfrSpec(
                n=gen.n,
                community_sizes=gen.community_sizes,
                avg_degree=gen.avg_degree,
                max_degree=gen.max_degree,
                degree_exponent=gen.degree_exponent,
                mu=value,
                seed=seed,
            )
        if self.noisy and not 0.0 < value <= 1.0:
            raise ConfigurationError(f"noise probability must lie in (0, 1], got {value}")
        return None

    def with_overrides(self, **updates) -> "ExperimentConfig":
        """Copy with ``updates`` applied (``None`` values ignored), validated again."""
        updates = {key: value for key, value in updates.items() if value is not None}
        if not updates:
            return self
        data = self.model_dump(mode="json")
        if "generator" in updates and isinstance(updates["generator"], dict):
            updates["generator"] = {**data["generator"], **updates["generator"]}
        return ExperimentConfig.model_validate({**data, **updates})


def _read_document(path: Path):
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        return yaml.safe_load(text)
    return json.loads(text)


@log_call
def load_experiment(path) -> ExperimentConfig:
    """Read, schema-check and validate an experiment recipe (JSON, or YAML by suffix).

    Relative dataset paths resolve against the recipe's directory.

    Raises:
        jsonschema.ValidationError: the document does not match the recipe schema.
        pydantic.ValidationError: values are out of range or inconsistent.
        ConfigurationError: a referenced dataset directory does not exist.

    """
    path = Path(path)
    try:
        document = _read_document(path)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"{path}: cannot parse recipe: {e}") from e
    jsonschema.validate(instance=document, schema=EXPERIMENT_SCHEMA)

    if document.get("kind") == ExperimentKind.REAL.value:
        generator = dict(document["generator"])
        resolved = []
        for dataset in generator["datasets"]:
            location = Path(dataset)
            if not location.is_absolute():
                location = (path.parent / location).resolve()
            if not location.is_dir():
                raise ConfigurationError(f"{path}: dataset directory {dataset} not found")
            resolved.append(str(location))
        generator["datasets"] = resolved
        document = {**document, "generator": generator}

    config = ExperimentConfig.model_validate(document)
    logger.info(
        f"Loaded experiment {config.name}: {config.kind.value}, {len(config.points)} point(s), "
        f"{config.samples} sample(s), {len(config.methods)} method(s)"
    )
    return config

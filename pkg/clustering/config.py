# clustering/config.py
# Validated quality-function and solver configuration

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

SEED_MAX = (1 << 64) - 1


class Variant(str, Enum):
    """Scalar quality function: mean, mean minus variance, mean plus variance."""

    MEAN = "mean"
    VAR_MINUS = "var_minus"
    VAR_PLUS = "var_plus"


class Ordering(str, Enum):
    """Order in which phase one visits the nodes of the current graph."""

    COMMUNITY_SIZE = "community_size"
    RANDOM = "random"
    NATURAL = "natural"


class QualityConfig(BaseModel):
    """Variant selector, variance weight ``gamma`` and Pareto-list length ``h``.

    ``gamma`` is ignored by the mean variant but must still lie strictly
    inside ``(0, 1)``.
    """

    model_config = ConfigDict(frozen=True)

    variant: Variant = Variant.MEAN
    gamma: float = Field(default=0.5, gt=0.0, lt=1.0)
    h: int = Field(default=1, ge=1)


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    quality: QualityConfig = QualityConfig()
    ordering: Ordering = Ordering.COMMUNITY_SIZE
    seed: int = Field(default=0, ge=0, le=SEED_MAX)
    max_outer_iters: int = Field(default=100, ge=1)
    max_inner_sweeps: int = Field(default=1000, ge=1)
    # run the Pareto-list assertion suite after every outer iteration
    check_invariants: bool = False
    # record the move trace in the result (used by reduction checks)
    record_moves: bool = False

# benchmarks/specs.py
# Validated parameter sets for synthetic multiplex benchmarks

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from clustering.config import SEED_MAX


class SbmSpec(BaseModel):
    """Multilayer stochastic block model.

    Informative layers use ``p_in`` inside planted communities and ``p_out``
    across them; noisy layers connect every pair with ``p_noise``.
    """

    model_config = ConfigDict(frozen=True)

    sizes: tuple[int, ...] = (125, 125, 125, 125)
    p_in: float = Field(default=0.1, gt=0.0, le=1.0)
    p_out: float = Field(default=0.1 / 3, ge=0.0, le=1.0)
    informative_layers: int = Field(default=2, ge=0)
    noisy_layers: int = Field(default=0, ge=0)
    p_noise: float = Field(default=0.1, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, le=SEED_MAX)

    @field_validator("sizes")
    @classmethod
    def _sizes(cls, sizes):
        if not sizes or min(sizes) < 1:
            raise ValueError("community sizes must be positive")
        if sum(sizes) < 2:
            raise ValueError("an SBM needs at least two nodes")
        return sizes

    @model_validator(mode="after")
    def _layers(self):
        if self.informative_layers + self.noisy_layers < 1:
            raise ValueError("an SBM needs at least one layer")
        if self.informative_layers and self.p_in < self.p_out:
            raise ValueError(f"p_in={self.p_in} is below p_out={self.p_out}")
        if self.noisy_layers and self.p_noise == 0.0:
            raise ValueError("noisy layers need p_noise > 0")
        return self

    @property
    def n(self) -> int:
        return sum(self.sizes)


class LfrSpec(BaseModel):
    """One LFR-style layer with planted communities.

    A ``noisy`` layer puts every node in one community with ``mu = 0``,
    which leaves a configuration-model graph with the same degree law.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=128, ge=2)
    community_sizes: tuple[int, ...] = (32, 32, 32, 32)
    avg_degree: float = Field(default=16.0, gt=0.0)
    max_degree: int = Field(default=32, ge=1)
    mu: float = Field(default=0.3, ge=0.0, lt=1.0)
    degree_exponent: float = Field(default=2.0, gt=1.0)
    noisy: bool = False
    seed: int = Field(default=0, ge=0, le=SEED_MAX)

    @model_validator(mode="after")
    def _consistent(self):
        if not self.avg_degree <= self.max_degree < self.n:
            raise ValueError(
                f"need avg_degree <= max_degree < n, got {self.avg_degree}, {self.max_degree}, {self.n}"
            )
        if sum(self.community_sizes) != self.n or min(self.community_sizes) < 1:
            raise ValueError(f"community sizes {self.community_sizes} do not cover n={self.n}")
        return self

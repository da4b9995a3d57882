"""Run configuration schema (JSON, version 1)."""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from qsc_ldpc.config import settings
from qsc_ldpc.models.code import ConstructionSpec


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CapacitySection(_Section):
    """Capacity and capacity-loss table grid."""

    m: list[int] = Field(default_factory=lambda: [1, 2, 4, 8], min_length=1)
    epsilon: list[float] = Field(default_factory=lambda: [0.1], min_length=1)


class LayeredSection(_Section):
    """Layered-rate table grid, thick-layer splits included."""

    m: list[int] = Field(default_factory=lambda: [4], min_length=1)
    epsilon: list[float] = Field(default_factory=lambda: [0.25], min_length=1)


class ExitSection(_Section):
    """Front-end EXIT curves."""

    m: list[int] = Field(default_factory=lambda: [4, 8], min_length=1)
    epsilon: list[float] = Field(default_factory=lambda: [0.25], min_length=1)
    models: list[Literal["bec", "gauss", "bec-mc"]] = Field(
        default_factory=lambda: ["bec", "gauss"], min_length=1
    )
    grid_points: int = Field(default_factory=lambda: settings().exit_grid_points)
    n_samples: int = Field(default_factory=lambda: settings().gaussian_samples)


class DesignSection(_Section):
    """Check-degree optimization, optionally swept over epsilon."""

    m: list[int] = Field(default_factory=lambda: [4], min_length=1)
    epsilon: list[float] = Field(default_factory=lambda: [0.26], min_length=1)
    d_v: int = Field(default_factory=lambda: settings().d_v, ge=2)
    d_c_max: int = Field(default_factory=lambda: settings().d_c_max, ge=2)
    margin: float = Field(default_factory=lambda: settings().design_margin, ge=0.0)
    prior_model: Literal["gaussian", "bec"] = "gaussian"
    n_samples: int = Field(default_factory=lambda: settings().gaussian_samples)
    threshold: bool = False


class CodeSource(_Section):
    """Where the simulated code comes from: an alist file or a PEG construction."""

    alist: str | None = None
    construction: ConstructionSpec | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "CodeSource":
        if (self.alist is None) == (self.construction is None):
            raise ValueError("give exactly one of 'alist' or 'construction'")
        return self


class SimConfig(_Section):
    """Monte-Carlo BER experiment."""

    code: CodeSource
    channel: Literal["qsc", "qsc-star"] = "qsc"
    m: int = Field(..., ge=1, le=62)
    eps_cond: list[float] | None = None
    epsilon: list[float] = Field(..., min_length=1)
    max_iter: int = Field(default_factory=lambda: settings().max_iter, ge=1)
    frontend_refresh_period: int = Field(
        default_factory=lambda: settings().frontend_refresh_period, ge=0
    )
    min_bit_errors: int = Field(default_factory=lambda: settings().min_bit_errors, ge=1)
    max_codewords: int = Field(default_factory=lambda: settings().max_codewords, ge=1)
    all_zero: bool = False
    baseline: bool = False
    seed: int | None = None
    workers: int = Field(default_factory=lambda: settings().workers, ge=1)

    @model_validator(mode="after")
    def _check_channel(self) -> "SimConfig":
        if any(not 0.0 <= e <= 1.0 for e in self.epsilon):
            raise ValueError("epsilon values must lie in [0, 1]")
        if self.channel == "qsc-star":
            if self.eps_cond is None or len(self.eps_cond) != self.m:
                raise ValueError("qsc-star needs eps_cond with m entries")
        return self


class RunConfig(_Section):
    """Top-level JSON configuration; the construction section is keyed ``construct``."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    version: Literal[1] = 1
    seed: int | None = None
    workers: int | None = Field(default=None, ge=1)
    capacity: CapacitySection | None = None
    layered: LayeredSection | None = None
    exit: ExitSection | None = None
    design: DesignSection | None = None
    construction: ConstructionSpec | None = Field(default=None, alias="construct")
    simulate: SimConfig | None = None

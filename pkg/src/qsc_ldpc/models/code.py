"""Degree distribution, construction and design problem models."""
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qsc_ldpc.config import settings


def _normalized(side: dict[int, float], name: str) -> dict[int, float]:
    if not side:
        raise ValueError(f"{name} must have at least one degree")
    for degree, fraction in side.items():
        if degree < 1:
            raise ValueError(f"{name} degree {degree} must be >= 1")
        if fraction < 0.0:
            raise ValueError(f"{name}[{degree}] = {fraction} is negative")
    total = sum(side.values())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"{name} fractions sum to {total}, expected 1")
    return dict(sorted(side.items()))


class DegreeDistribution(BaseModel):
    """Edge-perspective variable (lambda) and check (rho) degree distributions."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: dict[int, float] = Field(..., alias="lambda")
    rho: dict[int, float] = Field(...)

    @field_validator("lambda_")
    @classmethod
    def _check_lambda(cls, value: dict[int, float]) -> dict[int, float]:
        return _normalized(value, "lambda")

    @field_validator("rho")
    @classmethod
    def _check_rho(cls, value: dict[int, float]) -> dict[int, float]:
        return _normalized(value, "rho")

    @model_validator(mode="after")
    def _check_rate(self) -> "DegreeDistribution":
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"design rate {self.rate:.6g} is outside (0, 1)")
        return self

    @property
    def rate(self) -> float:
        """Design rate 1 - (sum rho_d/d) / (sum lambda_d/d)."""
        check_side = sum(f / d for d, f in self.rho.items())
        var_side = sum(f / d for d, f in self.lambda_.items())
        return 1.0 - check_side / var_side

    @property
    def check_node_fractions(self) -> dict[int, float]:
        """Node-perspective fraction of checks having each degree."""
        weights = {d: f / d for d, f in self.rho.items() if f > 0.0}
        total = sum(weights.values())
        return {d: w / total for d, w in weights.items()}

    def to_json_dict(self) -> dict[str, dict[int, float]]:
        """Dictionary with the public 'lambda' key."""
        return {"lambda": dict(self.lambda_), "rho": dict(self.rho)}


class ConstructionSpec(BaseModel):
    """Input of the symbol-constrained PEG construction."""

    model_config = ConfigDict(frozen=True)

    n_bits: int = Field(..., ge=2, description="Code length N in bits")
    symbol_width: int = Field(..., ge=1, le=62, description="Bits per symbol m")
    d_v: int = Field(default_factory=lambda: settings().d_v, ge=1)
    rho: dict[int, float] = Field(..., description="Edge-perspective check degrees")
    seed: int = Field(default=0, ge=0)

    @field_validator("rho")
    @classmethod
    def _check_rho(cls, value: dict[int, float]) -> dict[int, float]:
        return _normalized(value, "rho")

    @model_validator(mode="after")
    def _check_symbols(self) -> "ConstructionSpec":
        if self.n_bits % self.symbol_width:
            raise ValueError(
                f"n_bits={self.n_bits} is not a multiple of symbol_width="
                f"{self.symbol_width}"
            )
        return self

    @property
    def n_symbols(self) -> int:
        """Number of q-ary symbols per codeword."""
        return self.n_bits // self.symbol_width


class DesignProblem(BaseModel):
    """Check-degree optimization at fixed variable degree."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1, le=62)
    epsilon: float = Field(..., ge=0.0, le=1.0)
    d_v: int = Field(default_factory=lambda: settings().d_v, ge=2)
    d_c_max: int = Field(default_factory=lambda: settings().d_c_max, ge=2)
    grid_points: int = Field(
        default_factory=lambda: settings().exit_grid_points, ge=2
    )
    i_max: float = Field(default_factory=lambda: settings().design_i_max, gt=0, lt=1)
    prior_model: str = Field(default="gaussian", pattern="^(gaussian|bec)$")
    n_samples: int = Field(default_factory=lambda: settings().gaussian_samples, ge=100)
    margin: float = Field(default_factory=lambda: settings().design_margin, ge=0.0)
    seed: int = Field(default=0, ge=0)
    min_rate: float = Field(default=1e-3, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_degrees(self) -> "DesignProblem":
        if self.d_c_max < self.d_v:
            raise ValueError(f"d_c_max={self.d_c_max} is below d_v={self.d_v}")
        return self

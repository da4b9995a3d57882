"""Result rows and curves emitted by the toolkit."""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from qsc_ldpc.models.code import DegreeDistribution


class McEstimate(BaseModel):
    """Monte-Carlo estimate with its standard error."""

    model_config = ConfigDict(frozen=True)

    value: float
    stderr: float = Field(..., ge=0.0)
    n_samples: int = Field(..., ge=1)


class ExitCurve(BaseModel):
    """Sampled front-end transfer function I_e(I_a)."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1)
    epsilon: float = Field(..., ge=0.0, le=1.0)
    model: Literal["bec", "gauss", "bec-mc"]
    i_a: tuple[float, ...]
    i_e: tuple[float, ...]
    n_samples: int = Field(default=0, ge=0, description="0 for closed-form curves")
    seed: int | None = None

    @model_validator(mode="after")
    def _check_points(self) -> "ExitCurve":
        if len(self.i_a) != len(self.i_e) or not self.i_a:
            raise ValueError("i_a and i_e must be nonempty and of equal length")
        if any(b <= a for a, b in zip(self.i_a, self.i_a[1:])):
            raise ValueError("i_a grid must be strictly increasing")
        if any(not -1e-12 <= v <= 1.0 + 1e-12 for v in self.i_a + self.i_e):
            raise ValueError("mutual information values must lie in [0, 1]")
        return self

    def rows(self) -> list[dict[str, float | int | str]]:
        """CSV rows (i_a, i_e, model, m, epsilon, n_samples)."""
        return [
            {
                "i_a": a,
                "i_e": e,
                "model": self.model,
                "m": self.m,
                "epsilon": self.epsilon,
                "n_samples": self.n_samples,
            }
            for a, e in zip(self.i_a, self.i_e)
        ]


class BerRecord(BaseModel):
    """Outcome of one sweep point of a BER simulation."""

    epsilon: float
    codewords: int = Field(..., ge=0)
    bits: int = Field(..., ge=0)
    bit_errors: int = Field(..., ge=0)
    ber: float = Field(..., ge=0.0, le=1.0)
    ber_low: float = Field(..., ge=0.0, le=1.0, description="95% Wilson lower bound")
    ber_high: float = Field(..., ge=0.0, le=1.0, description="95% Wilson upper bound")
    frame_errors: int = Field(..., ge=0)
    fer: float = Field(..., ge=0.0, le=1.0)
    symbol_errors: int = Field(..., ge=0)
    ser: float = Field(..., ge=0.0, le=1.0)
    mean_iterations: float = Field(..., ge=0.0)
    wall_time: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _check_counts(self) -> "BerRecord":
        if self.bit_errors > self.bits:
            raise ValueError("bit_errors exceeds bits")
        if self.frame_errors > self.codewords:
            raise ValueError("frame_errors exceeds codewords")
        return self


class DesignResult(BaseModel):
    """Optimized degree distribution and its figures of merit."""

    m: int
    epsilon: float
    distribution: DegreeDistribution
    rate: float
    threshold: float | None = None
    min_slack: float
    normalized_capacity: float
    shannon_limit: float | None = None

    def to_json_dict(self) -> dict[str, object]:
        """The public JSON shape {lambda, rho, rate, threshold, ...}."""
        payload: dict[str, object] = dict(self.distribution.to_json_dict())
        payload.update(
            {
                "rate": self.rate,
                "threshold": self.threshold,
                "m": self.m,
                "epsilon": self.epsilon,
                "min_slack": self.min_slack,
                "normalized_capacity": self.normalized_capacity,
                "shannon_limit": self.shannon_limit,
            }
        )
        return payload


class ConstructionReport(BaseModel):
    """Summary of a constructed parity-check matrix."""

    n_bits: int
    n_checks: int
    symbol_width: int
    seed: int
    variable_degrees: dict[int, int]
    check_degrees: dict[int, int]
    target_check_degrees: dict[int, int]
    girth: int | None = Field(..., description="None when the graph is cycle-free")
    violations: list[tuple[int, int]]
    rate: float

"""Channel parameter models."""
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ChannelParams(BaseModel):
    """q-ary symmetric channel with q = 2^m symbols and symbol error rate epsilon."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1, le=62, description="Bits per symbol")
    epsilon: float = Field(..., ge=0.0, le=1.0, description="Symbol error probability")

    @property
    def q(self) -> int:
        """Alphabet size."""
        return 1 << self.m


class QscStarParams(BaseModel):
    """q-SC with conditionally independent binary sub-channels."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1, le=62, description="Bits per symbol")
    epsilon: float = Field(..., ge=0.0, le=1.0, description="Symbol error probability")
    eps_cond: tuple[float, ...] = Field(
        ..., description="Bit error probabilities conditioned on a symbol error"
    )

    @model_validator(mode="after")
    def _check_sub_channels(self) -> "QscStarParams":
        if len(self.eps_cond) != self.m:
            raise ValueError(
                f"eps_cond has {len(self.eps_cond)} entries, expected m={self.m}"
            )
        if any(not 0.0 < e < 1.0 for e in self.eps_cond):
            raise ValueError("every eps_cond entry must lie in (0, 1)")
        if self.no_error_product >= 1.0:
            raise ValueError("prod(1 - eps_cond) must be < 1")
        alpha = self.alpha
        worst = max(self.eps_cond)
        if alpha * worst > 1.0 + 1e-12:
            raise ValueError(
                f"alpha*eps_cond = {alpha * worst:.6g} exceeds 1; "
                "marginal bit error probabilities would be invalid"
            )
        return self

    @property
    def q(self) -> int:
        """Alphabet size."""
        return 1 << self.m

    @property
    def no_error_product(self) -> float:
        """prod_i (1 - eps_cond[i])."""
        return math.prod(1.0 - e for e in self.eps_cond)

    @property
    def alpha(self) -> float:
        """Normalizer making the nonzero error patterns carry mass epsilon."""
        return self.epsilon / (1.0 - self.no_error_product)

    @property
    def marginal_eps(self) -> tuple[float, ...]:
        """Marginal bit error probabilities alpha * eps_cond[i]."""
        alpha = self.alpha
        return tuple(alpha * e for e in self.eps_cond)

    @classmethod
    def from_qsc(cls, m: int, epsilon: float) -> "QscStarParams":
        """The q-SC written as a q-SC* (all conditional probabilities 1/2)."""
        return cls(m=m, epsilon=epsilon, eps_cond=(0.5,) * m)


class LayerProfile(BaseModel):
    """Per-layer BSEC parameters of the layered scheme."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(..., ge=1)
    epsilon: float = Field(..., ge=0.0, le=1.0)
    eps_i: tuple[float, ...] = Field(..., description="Layer crossover probabilities")
    delta_i: tuple[float, ...] = Field(..., description="Layer erasure probabilities")
    order: tuple[int, ...] = Field(
        ..., description="Bit index (0-based) decoded in each layer"
    )

    @model_validator(mode="after")
    def _check_layers(self) -> "LayerProfile":
        if not len(self.eps_i) == len(self.delta_i) == len(self.order) == self.m:
            raise ValueError("layer sequences must all have length m")
        if sorted(self.order) != list(range(self.m)):
            raise ValueError("order must be a permutation of 0..m-1")
        for d, e in zip(self.delta_i, self.eps_i):
            if d + e > 1.0 + 1e-12:
                raise ValueError("delta_i + eps_i must not exceed 1")
        return self

    def by_bit(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """(eps, delta) re-indexed by bit position instead of layer."""
        eps = [0.0] * self.m
        delta = [0.0] * self.m
        for layer, bit in enumerate(self.order):
            eps[bit] = self.eps_i[layer]
            delta[bit] = self.delta_i[layer]
        return tuple(eps), tuple(delta)

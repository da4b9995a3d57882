"""EXIT characterization of the symbol front-end.

The BEC-prior curve is closed form; the Gaussian-prior curve is estimated by
pushing consistent Gaussian a-priori LLRs through the real front-end.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad, trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.stats import binom

from qsc_ldpc.config import settings
from qsc_ldpc.exceptions import NumericalError, ParameterDomainError
from qsc_ldpc.models.channel import ChannelParams
from qsc_ldpc.models.results import ExitCurve, McEstimate
from qsc_ldpc.services.channel import capacity_bsec, capacity_qsc, transmit
from qsc_ldpc.services.frontend import refresh
from qsc_ldpc.services.layered import layer_params

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

_LN2 = math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
SIGMA_MAX = 200.0
# a-priori sigma used for I_a = 1; every LLR then saturates the clip
SIGMA_CERTAIN = 60.0
QUADRATURE_POINTS = 10_001


def _check_unit(i_a: npt.ArrayLike) -> FloatArray:
    arr = np.asarray(i_a, dtype=np.float64)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ParameterDomainError("a-priori information must lie in [0, 1]")
    return arr


def lambda_t(i_a: npt.ArrayLike, m: int, t: int) -> FloatArray | float:
    """Probability that t of the other m-1 a-priori messages are erased."""
    if not 0 <= t <= m - 1:
        raise ParameterDomainError(f"t must lie in [0, {m - 1}], got {t}")
    value = binom.pmf(t, m - 1, 1.0 - _check_unit(i_a))
    return float(value) if np.ndim(value) == 0 else value


def layer_infos(m: int, epsilon: float) -> FloatArray:
    """I_t for t = 0..m-1: the BSEC capacity of layer m - t."""
    profile = layer_params(m, epsilon)
    return np.array(
        [
            capacity_bsec(profile.delta_i[m - t - 1], profile.eps_i[m - t - 1])
            for t in range(m)
        ]
    )


def layer_info(t: int, m: int, epsilon: float) -> float:
    """Extrinsic information when t of the other bits are erased."""
    if not 0 <= t <= m - 1:
        raise ParameterDomainError(f"t must lie in [0, {m - 1}], got {t}")
    return float(layer_infos(m, epsilon)[t])


def exit_bec(i_a: npt.ArrayLike, m: int, epsilon: float) -> FloatArray | float:
    """Front-end EXIT function for erasure priors."""
    arr = _check_unit(i_a)
    infos = layer_infos(m, epsilon)
    t = np.arange(m)
    weights = binom.pmf(t, m - 1, 1.0 - arr[..., None])
    value = weights @ infos
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class AreaIdentity:
    """m times the area under the BEC curve, two ways, against the q-SC capacity."""

    analytic: float
    quadrature: float
    capacity: float

    @property
    def difference(self) -> float:
        """analytic - capacity."""
        return self.analytic - self.capacity

    @property
    def quadrature_error(self) -> float:
        """|quadrature - analytic|."""
        return abs(self.quadrature - self.analytic)


def area_identity(
    m: int, epsilon: float, points: int = QUADRATURE_POINTS
) -> AreaIdentity:
    """Each lambda_t integrates to 1/m, so m times the area is sum_t I_t."""
    analytic = float(layer_infos(m, epsilon).sum())
    grid = np.linspace(0.0, 1.0, points)
    numeric = float(m * trapezoid(exit_bec(grid, m, epsilon), grid))
    return AreaIdentity(
        analytic=analytic,
        quadrature=numeric,
        capacity=capacity_qsc(ChannelParams(m=m, epsilon=epsilon)),
    )


def _j_complement(sigma: float) -> float:
    """1 - J(sigma) = E[log2(1 + exp(-L))] for L ~ N(sigma^2/2, sigma^2)."""
    if sigma == 0.0:
        return 1.0
    mean = 0.5 * sigma * sigma

    def integrand(z: float) -> float:
        pdf = math.exp(-0.5 * z * z) / _SQRT_2PI
        arg = -(mean + sigma * z)
        softplus = max(arg, 0.0) + math.log1p(math.exp(-abs(arg)))
        return pdf * softplus / _LN2

    value, _ = quad(
        integrand,
        -38.0,
        38.0,
        points=[-0.5 * sigma],
        epsabs=0.0,
        epsrel=1e-12,
        limit=400,
    )
    return float(value)


def j_map(sigma: float) -> float:
    """Mutual information of a consistent Gaussian LLR with standard deviation sigma."""
    if sigma < 0.0:
        raise ParameterDomainError(f"sigma must be non-negative, got {sigma}")
    return 1.0 - _j_complement(sigma)


def j_inv(i: float) -> float:
    """Inverse of j_map on [0, 1)."""
    if not 0.0 <= i < 1.0:
        raise ParameterDomainError(f"mutual information must lie in [0, 1), got {i}")
    if i == 0.0:
        return 0.0
    target = 1.0 - i
    if _j_complement(SIGMA_MAX) > target:
        raise NumericalError(f"j_inv({i}) lies beyond sigma={SIGMA_MAX}")
    root = brentq(
        lambda s: _j_complement(s) - target, 0.0, SIGMA_MAX, xtol=1e-13, rtol=1e-15
    )
    return float(root)


class JTable:
    """Tabulated J-map for vectorized use in the designer.

    ``log(1 - J)`` is interpolated with a monotone cubic on a uniform sigma
    grid; the inverse is found by vectorized bisection on that interpolant.
    """

    def __init__(self, sigma_max: float = 20.0, points: int = 1601) -> None:
        """Evaluate the exact map on the grid."""
        self.sigma_max = sigma_max
        self.sigma = np.linspace(0.0, sigma_max, points)
        comp = np.array([_j_complement(float(s)) for s in self.sigma])
        self._log_comp = PchipInterpolator(self.sigma, np.log(comp), extrapolate=False)
        self.i_max = 1.0 - float(comp[-1])

    def j(self, sigma: npt.ArrayLike) -> FloatArray:
        """J(sigma), saturating beyond the grid."""
        s = np.clip(np.asarray(sigma, dtype=np.float64), 0.0, self.sigma_max)
        return 1.0 - np.exp(self._log_comp(s))

    def j_inv(self, i: npt.ArrayLike, iterations: int = 64) -> FloatArray:
        """J^-1(i) by bisection; values at or beyond the table top map to sigma_max."""
        target = np.clip(np.asarray(i, dtype=np.float64), 0.0, self.i_max)
        lo = np.zeros_like(target)
        hi = np.full_like(target, self.sigma_max)
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            below = self.j(mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)


@lru_cache(maxsize=1)
def j_table() -> JTable:
    """Process-wide J table."""
    logger.debug("Tabulating the J-map")
    return JTable()


def llr_information(signed_llr: npt.ArrayLike) -> FloatArray:
    """Per-sample 1 - log2(1 + exp(-L)) for sign-corrected LLRs."""
    return 1.0 - np.logaddexp(0.0, -np.asarray(signed_llr, dtype=np.float64)) / _LN2


def _estimate(per_bit: FloatArray) -> McEstimate:
    per_symbol = per_bit.mean(axis=1)
    n = per_symbol.size
    stderr = float(per_symbol.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(value=float(per_symbol.mean()), stderr=stderr, n_samples=n)


def _draw_block(
    m: int, epsilon: float, n_samples: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, FloatArray]:
    p = ChannelParams(m=m, epsilon=epsilon)
    x = rng.integers(0, 2, size=(n_samples, m), dtype=np.uint8)
    y = transmit(x, p, rng)
    return x, y, 1.0 - 2.0 * x


def exit_gaussian_mc(
    i_a: float,
    m: int,
    epsilon: float,
    n_samples: int | None = None,
    seed: int | None = None,
) -> McEstimate:
    """Front-end EXIT point under consistent Gaussian priors.

    ``n_samples`` counts symbols; the standard error is taken over per-symbol
    averages since the m outputs of one symbol are correlated.
    """
    _check_unit(i_a)
    count = settings().gaussian_samples if n_samples is None else n_samples
    rng = np.random.default_rng(seed)
    sigma = SIGMA_CERTAIN if i_a >= 1.0 else j_inv(i_a)
    x, y, sign = _draw_block(m, epsilon, count, rng)
    l_a = sign * (0.5 * sigma * sigma) + sigma * rng.standard_normal((count, m))
    l_ch = refresh(y, l_a, ChannelParams(m=m, epsilon=epsilon))
    return _estimate(llr_information(sign * l_ch))


def exit_bec_mc(
    i_a: float,
    m: int,
    epsilon: float,
    n_samples: int | None = None,
    seed: int | None = None,
) -> McEstimate:
    """Front-end EXIT point under erasure priors, estimated through refresh."""
    _check_unit(i_a)
    count = settings().gaussian_samples if n_samples is None else n_samples
    rng = np.random.default_rng(seed)
    x, y, sign = _draw_block(m, epsilon, count, rng)
    known = rng.random((count, m)) < i_a
    l_a = np.where(known, sign * settings().llr_clip, 0.0)
    l_ch = refresh(y, l_a, ChannelParams(m=m, epsilon=epsilon))
    return _estimate(llr_information(sign * l_ch))


def exit_curve(
    m: int,
    epsilon: float,
    model: str = "bec",
    grid_points: int | None = None,
    n_samples: int | None = None,
    seed: int | None = None,
) -> ExitCurve:
    """I_e sampled on a uniform I_a grid for one prior model."""
    points = settings().exit_grid_points if grid_points is None else grid_points
    grid = np.linspace(0.0, 1.0, points)
    if model == "bec":
        values = np.asarray(exit_bec(grid, m, epsilon))
        used = 0
    elif model in ("gauss", "bec-mc"):
        estimator = exit_gaussian_mc if model == "gauss" else exit_bec_mc
        seeds = np.random.SeedSequence(seed).spawn(points)
        estimates = [
            estimator(
                float(a),
                m,
                epsilon,
                n_samples,
                int(s.generate_state(1)[0]),
            )
            for a, s in zip(grid, seeds)
        ]
        values = np.array([e.value for e in estimates])
        used = estimates[0].n_samples
    else:
        raise ParameterDomainError(f"unknown prior model {model!r}")
    logger.info(f"EXIT curve m={m}, epsilon={epsilon}, model={model}: {points} points")
    return ExitCurve(
        m=m,
        epsilon=epsilon,
        model=model,  # type: ignore[arg-type]
        i_a=tuple(float(a) for a in grid),
        i_e=tuple(float(np.clip(v, 0.0, 1.0)) for v in values),
        n_samples=used,
        seed=seed,
    )

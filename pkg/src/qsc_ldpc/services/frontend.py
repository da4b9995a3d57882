"""Symbol front-end: refreshed channel LLRs from intra-symbol extrinsic beliefs.

All functions accept a single symbol (shape ``(m,)``) or a block of symbols
(shape ``(n, m)``) and work along the last axis. LLRs follow the bit-value
convention ``log P(x=0) / P(x=1)``; ``y`` holds the received bits.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import expit, logsumexp

from qsc_ldpc.config import settings
from qsc_ldpc.exceptions import ParameterDomainError
from qsc_ldpc.models.channel import ChannelParams, QscStarParams
from qsc_ldpc.services.channel import (
    symbols_from_indices,
    transition_probabilities,
    transition_probabilities_qsc_star,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

PROB_FLOOR = 1e-12
BRUTE_FORCE_MAX_M = 12


def _sign(y: npt.ArrayLike) -> FloatArray:
    return 1.0 - 2.0 * np.asarray(y, dtype=np.float64)


def _clip_value(clip: float | None) -> float:
    return settings().llr_clip if clip is None else clip


def extrinsic_agreement(y: npt.ArrayLike, l_a: npt.ArrayLike) -> FloatArray:
    """p_i = P(x_i = y_i) from a-priori LLRs, clamped away from 0 and 1."""
    p = expit(_sign(y) * np.asarray(l_a, dtype=np.float64))
    return np.clip(p, PROB_FLOOR, 1.0 - PROB_FLOOR)


def exclusion_products(values: np.ndarray) -> np.ndarray:
    """prod_{k != i} values[k] for every i along the last axis.

    Forward and backward running products, no division and no enumeration
    of the 2^m patterns. Works on object arrays as well.
    """
    ones = np.ones_like(values[..., :1])
    prefix = np.concatenate([ones, np.cumprod(values[..., :-1], axis=-1)], axis=-1)
    suffix = np.concatenate(
        [np.cumprod(values[..., :0:-1], axis=-1)[..., ::-1], ones], axis=-1
    )
    return prefix * suffix


def init_llr(p: ChannelParams) -> float:
    """Magnitude of the first-iteration channel LLR, the marginal-BSC LLR."""
    upper = 2.0 * (1.0 - 2.0**-p.m)
    if not 0.0 < p.epsilon < upper:
        raise ParameterDomainError(
            f"channel LLR undefined: need 0 < epsilon < {upper:.12g}, got {p.epsilon}"
        )
    return math.log((upper - p.epsilon) / p.epsilon)


@dataclass
class FrontEndState:
    """Intermediate quantities of one front-end refresh."""

    p: FloatArray
    beta: FloatArray
    beta_excl: FloatArray
    eps_out: FloatArray
    l_ch: FloatArray


def front_end_state(
    y: npt.ArrayLike,
    l_a: npt.ArrayLike,
    p: ChannelParams,
    clip: float | None = None,
) -> FrontEndState:
    """Run the q-SC message rules and keep every intermediate value."""
    limit = _clip_value(clip)
    sign = _sign(y)
    agree = extrinsic_agreement(y, l_a)
    beta_excl = exclusion_products(agree)
    beta = beta_excl[..., :1] * agree[..., :1]
    q = float(p.q)
    eps = p.epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        eps_out = eps / (2.0 * eps + beta_excl * (q - eps * q - 1.0))
        magnitude = np.log1p(-eps_out) - np.log(eps_out)
    if eps == 0.0:
        eps_out = np.zeros_like(beta_excl)
        magnitude = np.full_like(beta_excl, limit)
    l_ch = np.clip(sign * magnitude, -limit, limit)
    return FrontEndState(
        p=agree,
        beta=beta[..., 0],
        beta_excl=beta_excl,
        eps_out=eps_out,
        l_ch=l_ch,
    )


def refresh(
    y: npt.ArrayLike,
    l_a: npt.ArrayLike,
    p: ChannelParams,
    clip: float | None = None,
) -> FloatArray:
    """Refreshed channel LLRs from a-priori bit LLRs (message-passing form)."""
    return front_end_state(y, l_a, p, clip).l_ch


def channel_term(beta_excl: npt.ArrayLike, p: ChannelParams, clip: float) -> FloatArray:
    """L(X_i = y_i) contributed by the channel given beta_[i] (direct form)."""
    beta = np.asarray(beta_excl, dtype=np.float64)
    if p.epsilon == 0.0:
        return np.full_like(beta, clip)
    q = float(p.q)
    with np.errstate(divide="ignore"):
        term = np.log1p(beta * (q - q * p.epsilon - 1.0) / p.epsilon)
    return np.clip(term, -clip, clip)


def app_llr_direct(
    y: npt.ArrayLike,
    l_extr: npt.ArrayLike,
    p: ChannelParams,
    clip: float | None = None,
) -> FloatArray:
    """A-posteriori bit LLRs: channel term plus the bit's own extrinsic LLR."""
    limit = _clip_value(clip)
    extr = np.asarray(l_extr, dtype=np.float64)
    agree = extrinsic_agreement(y, extr)
    term = channel_term(exclusion_products(agree), p, limit)
    return np.clip(_sign(y) * term + extr, -limit, limit)


def refresh_qsc_star(
    y: npt.ArrayLike,
    l_a: npt.ArrayLike,
    p: QscStarParams,
    clip: float | None = None,
) -> FloatArray:
    """Refreshed channel LLRs for the q-SC* front-end."""
    limit = _clip_value(clip)
    sign = _sign(y)
    agree = extrinsic_agreement(y, l_a)
    if p.epsilon == 0.0:
        return np.clip(sign * limit, -limit, limit)
    eps_c = np.asarray(p.eps_cond, dtype=np.float64)
    alpha = p.alpha
    g = eps_c + agree - 2.0 * eps_c * agree
    ratio_excl = exclusion_products(agree / g)
    inner = (1.0 - eps_c) / eps_c + (1.0 - alpha) / (alpha * eps_c) * ratio_excl
    with np.errstate(divide="ignore"):
        magnitude = np.log(inner)
    return np.clip(sign * magnitude, -limit, limit)


def _brute_log_masses(
    y: npt.ArrayLike,
    extr_probs: npt.ArrayLike,
    m: int,
    chan_row: FloatArray,
) -> tuple[FloatArray, npt.NDArray[np.uint8]]:
    if m > BRUTE_FORCE_MAX_M:
        raise ParameterDomainError(
            f"brute-force marginalization limited to m <= {BRUTE_FORCE_MAX_M}, got {m}"
        )
    probs = np.atleast_2d(np.asarray(extr_probs, dtype=np.float64))
    if probs.shape[-1] != m or np.asarray(y).shape[-1] != m:
        raise ParameterDomainError(f"symbols must carry m={m} bits")
    # row d of ``flips`` marks the bits where x differs from y
    flips = symbols_from_indices(np.arange(1 << m, dtype=np.int64), m)
    with np.errstate(divide="ignore"):
        log_agree = np.log(probs)
        log_flip = np.log1p(-probs)
        log_chan = np.log(chan_row)
    # where() rather than a matmul so that log(0) priors never meet a zero weight
    log_prior = np.where(
        flips[None, :, :] == 1, log_flip[:, None, :], log_agree[:, None, :]
    ).sum(axis=2)
    return log_prior + log_chan[None, :], flips


def _bit_log_mass(
    log_w: FloatArray, flips: npt.NDArray[np.uint8], flipped: int
) -> FloatArray:
    columns = [
        logsumexp(log_w[:, flips[:, i] == flipped], axis=1)
        for i in range(flips.shape[1])
    ]
    return np.stack(columns, axis=1)


def _brute_llr(
    log_w: FloatArray, flips: npt.NDArray[np.uint8], y: npt.ArrayLike
) -> FloatArray:
    ratio = _bit_log_mass(log_w, flips, 0) - _bit_log_mass(log_w, flips, 1)
    return (_sign(np.atleast_2d(y)) * ratio).reshape(np.shape(y))


def _brute_marginal(
    log_w: FloatArray, flips: npt.NDArray[np.uint8], shape: tuple[int, ...]
) -> FloatArray:
    total = logsumexp(log_w, axis=1)
    return np.exp(_bit_log_mass(log_w, flips, 0) - total[:, None]).reshape(shape)


def brute_force_marginal(
    y: npt.ArrayLike, extr_probs: npt.ArrayLike, p: ChannelParams
) -> FloatArray:
    """P(x_i = y_i | y, extrinsic) by summing over all 2^m symbol values."""
    log_w, flips = _brute_log_masses(y, extr_probs, p.m, transition_probabilities(p))
    return _brute_marginal(log_w, flips, np.shape(extr_probs))


def brute_force_llr(
    y: npt.ArrayLike, extr_probs: npt.ArrayLike, p: ChannelParams
) -> FloatArray:
    """A-posteriori bit LLRs by enumeration, from unnormalized masses."""
    log_w, flips = _brute_log_masses(y, extr_probs, p.m, transition_probabilities(p))
    return _brute_llr(log_w, flips, y)


def brute_force_marginal_qsc_star(
    y: npt.ArrayLike, extr_probs: npt.ArrayLike, p: QscStarParams
) -> FloatArray:
    """q-SC* counterpart of brute_force_marginal."""
    row = transition_probabilities_qsc_star(p)
    log_w, flips = _brute_log_masses(y, extr_probs, p.m, row)
    return _brute_marginal(log_w, flips, np.shape(extr_probs))


def brute_force_llr_qsc_star(
    y: npt.ArrayLike, extr_probs: npt.ArrayLike, p: QscStarParams
) -> FloatArray:
    """q-SC* counterpart of brute_force_llr."""
    row = transition_probabilities_qsc_star(p)
    log_w, flips = _brute_log_masses(y, extr_probs, p.m, row)
    return _brute_llr(log_w, flips, y)


class FrontEnd(ABC):
    """Channel-LLR provider used by the decoder.

    ``initial_llr`` is called once per codeword; ``refresh`` whenever the
    decoder schedule asks for new channel LLRs given the current extrinsic
    bit LLRs. Both work on flat N-bit arrays.
    """

    def __init__(self, m: int, clip: float | None = None) -> None:
        """Set symbol width and the LLR clip."""
        self.m = m
        self.clip = _clip_value(clip)
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def _symbol_llr(self, y: np.ndarray, l_a: FloatArray) -> FloatArray:
        """Channel LLRs for a block of shape (n, m)."""

    def initial_llr(self, y: npt.ArrayLike) -> FloatArray:
        """Channel LLRs with no extrinsic information."""
        bits = np.asarray(y, dtype=np.uint8)
        return self.refresh(bits, np.zeros(bits.shape[0], dtype=np.float64))

    def refresh(self, y: npt.ArrayLike, l_extr: npt.ArrayLike) -> FloatArray:
        """Channel LLRs given the per-bit extrinsic LLRs."""
        bits = np.asarray(y, dtype=np.uint8).reshape(-1, self.m)
        extr = np.asarray(l_extr, dtype=np.float64).reshape(-1, self.m)
        return self._symbol_llr(bits, extr).reshape(-1)


class QscFrontEnd(FrontEnd):
    """Symbol-aware front-end for the q-SC."""

    def __init__(self, params: ChannelParams, clip: float | None = None) -> None:
        """Bind the channel parameters."""
        super().__init__(params.m, clip)
        self.params = params

    def _symbol_llr(self, y: np.ndarray, l_a: FloatArray) -> FloatArray:
        return refresh(y, l_a, self.params, self.clip)


class QscStarFrontEnd(FrontEnd):
    """Symbol-aware front-end for the q-SC*."""

    def __init__(self, params: QscStarParams, clip: float | None = None) -> None:
        """Bind the channel parameters."""
        super().__init__(params.m, clip)
        self.params = params

    def _symbol_llr(self, y: np.ndarray, l_a: FloatArray) -> FloatArray:
        return refresh_qsc_star(y, l_a, self.params, self.clip)


class FrozenFrontEnd(FrontEnd):
    """Independent-BSC baseline: keeps the first-iteration LLRs forever."""

    def __init__(self, inner: FrontEnd) -> None:
        """Wrap the front-end whose initial LLRs are frozen."""
        super().__init__(inner.m, inner.clip)
        self.inner = inner

    def _symbol_llr(self, y: np.ndarray, l_a: FloatArray) -> FloatArray:
        return self.inner._symbol_llr(y, np.zeros_like(l_a))

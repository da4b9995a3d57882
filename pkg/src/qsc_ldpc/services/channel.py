"""q-SC and q-SC* channel models, sampling and capacity formulas.

Capacities are in bits (log2). Symbols are carried as ``(n, m)`` uint8 arrays;
bit ``i`` of symbol ``j`` is ``x[j, i]`` and the first column is the most
significant bit of the integer symbol index.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq
from scipy.special import entr, xlogy

from qsc_ldpc.exceptions import ParameterDomainError
from qsc_ldpc.models.channel import ChannelParams, QscStarParams

logger = logging.getLogger(__name__)

SymbolBlock = npt.NDArray[np.uint8]

_LN2 = math.log(2.0)
# Largest m for which the q-SC* error-pattern table is materialized.
_PATTERN_TABLE_MAX_M = 20


def binary_entropy(x: float) -> float:
    """h(x) in bits with h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ParameterDomainError(f"binary entropy needs 0 <= x <= 1, got {x}")
    return float((entr(x) + entr(1.0 - x)) / _LN2)


def _xlog2x(x: float) -> float:
    return float(xlogy(x, x) / _LN2)


def capacity_qsc(p: ChannelParams) -> float:
    """m - h(eps) - eps*log2(2^m - 1)."""
    tail = p.epsilon * math.log2(p.q - 1) if p.m > 1 else 0.0
    return p.m - binary_entropy(p.epsilon) - tail


def marginal_bsc_eps(p: ChannelParams) -> float:
    """Crossover probability of each marginal bit channel, q*eps / (2(q-1))."""
    return p.q * p.epsilon / (2.0 * (p.q - 1))


def capacity_bsc(eps_bsc: float) -> float:
    """1 - h(eps_bsc)."""
    return 1.0 - binary_entropy(eps_bsc)


def capacity_bsec(delta: float, eps: float) -> float:
    """Capacity of the binary symmetric erasure channel BSEC(delta, eps)."""
    if delta < 0.0 or eps < 0.0 or delta + eps > 1.0 + 1e-12:
        raise ParameterDomainError(
            f"BSEC needs delta, eps >= 0 and delta + eps <= 1, got ({delta}, {eps})"
        )
    keep = 1.0 - delta
    if keep <= 0.0:
        return 0.0
    return keep * (1.0 - binary_entropy(min(eps / keep, 1.0)))


def normalized_capacity(p: ChannelParams) -> float:
    """C_qSC / m."""
    return capacity_qsc(p) / p.m


def normalized_capacity_loss(p: ChannelParams) -> float:
    """Per-bit loss of the BSC decomposition, C_qSC/m - C_BSC."""
    return normalized_capacity(p) - capacity_bsc(marginal_bsc_eps(p))


def asymptotic_capacity_loss(epsilon: float) -> float:
    """Limit of the per-bit loss for m -> infinity, h(eps/2) - eps."""
    return binary_entropy(epsilon / 2.0) - epsilon


def relative_capacity_loss(p: ChannelParams) -> float | None:
    """1 - m*C_BSC/C_qSC, or None where the q-SC capacity is zero."""
    c_qsc = capacity_qsc(p)
    if c_qsc <= 0.0:
        logger.warning(
            f"q-SC capacity is zero at m={p.m}, epsilon={p.epsilon}; "
            "relative loss undefined"
        )
        return None
    return 1.0 - p.m * capacity_bsc(marginal_bsc_eps(p)) / c_qsc


def zero_capacity_epsilon(m: int) -> float:
    """Symbol error rate at which the q-SC capacity vanishes, 1 - 2^-m."""
    return 1.0 - 2.0**-m


def shannon_limit(m: int, rate: float) -> float:
    """Largest epsilon with C_qSC/m >= rate."""
    if not 0.0 < rate < 1.0:
        raise ParameterDomainError(f"rate must lie in (0, 1), got {rate}")

    def gap(eps: float) -> float:
        return normalized_capacity(ChannelParams(m=m, epsilon=eps)) - rate

    return float(brentq(gap, 0.0, zero_capacity_epsilon(m), xtol=1e-14))


def capacity_qsc_star(p: QscStarParams) -> float:
    """Capacity of the q-SC* under uniform inputs."""
    alpha = p.alpha
    if not alpha >= p.epsilon or not math.isfinite(alpha):
        raise ParameterDomainError(f"invalid alpha={alpha} for epsilon={p.epsilon}")
    sub_entropy = sum(binary_entropy(e) for e in p.eps_cond)
    return (
        p.m
        - alpha * sub_entropy
        + _xlog2x(1.0 - p.epsilon)
        + _xlog2x(alpha)
        - _xlog2x(max(alpha - p.epsilon, 0.0))
    )


def symbol_indices(x: SymbolBlock) -> npt.NDArray[np.int64]:
    """Integer index of every symbol (first column most significant)."""
    m = x.shape[1]
    weights = np.left_shift(np.int64(1), np.arange(m - 1, -1, -1, dtype=np.int64))
    return x.astype(np.int64) @ weights


def symbols_from_indices(indices: npt.ArrayLike, m: int) -> SymbolBlock:
    """Inverse of symbol_indices."""
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    idx = np.asarray(indices, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def symbols_from_bits(bits: npt.ArrayLike, m: int) -> SymbolBlock:
    """Group an N-bit word into N/m symbols; bit j belongs to symbol j // m."""
    flat = np.asarray(bits, dtype=np.uint8)
    if flat.ndim != 1 or flat.size % m:
        raise ParameterDomainError(
            f"cannot split {flat.size} bits into symbols of width {m}"
        )
    return flat.reshape(-1, m)


def bits_from_symbols(x: SymbolBlock) -> npt.NDArray[np.uint8]:
    """Flatten a symbol block back into the bit order of the code."""
    return np.ascontiguousarray(x, dtype=np.uint8).reshape(-1)


def _check_block(x: SymbolBlock, m: int) -> SymbolBlock:
    block = np.asarray(x)
    if block.ndim != 2 or block.shape[1] != m:
        raise ParameterDomainError(
            f"symbol block must have shape (n, {m}), got {block.shape}"
        )
    if block.size and (block.min() < 0 or block.max() > 1):
        raise ParameterDomainError("symbol block entries must be 0 or 1")
    return block.astype(np.uint8, copy=False)


def transmit(x: SymbolBlock, p: ChannelParams, rng: np.random.Generator) -> SymbolBlock:
    """Pass a block through the q-SC.

    An erroneous symbol is replaced by one of the other q-1 symbols, chosen
    uniformly by drawing from [0, q-1) and skipping the transmitted index.
    """
    block = _check_block(x, p.m)
    idx = symbol_indices(block)
    hit = rng.random(idx.shape[0]) < p.epsilon
    n_hit = int(np.count_nonzero(hit))
    out = idx.copy()
    if n_hit:
        draw = rng.integers(0, p.q - 1, size=n_hit, dtype=np.int64)
        sent = idx[hit]
        out[hit] = draw + (draw >= sent)
    return symbols_from_indices(out, p.m)


@lru_cache(maxsize=16)
def _pattern_table(p: QscStarParams) -> npt.NDArray[np.float64]:
    """P(e | symbol error) for e = 1..q-1."""
    patterns = symbols_from_indices(np.arange(1, p.q, dtype=np.int64), p.m)
    eps = np.asarray(p.eps_cond)
    log_p = patterns @ np.log(eps) + (1 - patterns) @ np.log1p(-eps)
    probs = np.exp(log_p)
    return probs / probs.sum()


def _sample_error_patterns(
    p: QscStarParams, count: int, rng: np.random.Generator
) -> SymbolBlock:
    if p.m <= _PATTERN_TABLE_MAX_M:
        table = _pattern_table(p)
        chosen = rng.choice(table.size, size=count, p=table) + 1
        return symbols_from_indices(chosen, p.m)
    eps = np.asarray(p.eps_cond)
    out = np.zeros((count, p.m), dtype=np.uint8)
    pending = np.arange(count)
    while pending.size:
        draw = (rng.random((pending.size, p.m)) < eps).astype(np.uint8)
        accepted = draw.any(axis=1)
        out[pending[accepted]] = draw[accepted]
        pending = pending[~accepted]
    return out


def transmit_qsc_star(
    x: SymbolBlock, p: QscStarParams, rng: np.random.Generator
) -> SymbolBlock:
    """Pass a block through the q-SC*: y = x XOR e with e != 0 on a symbol error."""
    block = _check_block(x, p.m)
    hit = rng.random(block.shape[0]) < p.epsilon
    n_hit = int(np.count_nonzero(hit))
    out = block.copy()
    if n_hit:
        out[hit] ^= _sample_error_patterns(p, n_hit, rng)
    return out


def transition_probabilities(p: ChannelParams) -> npt.NDArray[np.float64]:
    """P(y | x = 0) for every output index y (by symmetry any x gives a permutation)."""
    row = np.full(p.q, p.epsilon / (p.q - 1))
    row[0] = 1.0 - p.epsilon
    return row


def transition_probabilities_qsc_star(p: QscStarParams) -> npt.NDArray[np.float64]:
    """P(y | x = 0) of the q-SC*, from the displayed transition probabilities."""
    patterns = symbols_from_indices(np.arange(p.q, dtype=np.int64), p.m)
    eps = np.asarray(p.eps_cond)
    product = np.prod(np.where(patterns == 1, eps, 1.0 - eps), axis=1)
    row = p.alpha * product
    row[0] = 1.0 - p.epsilon
    return row

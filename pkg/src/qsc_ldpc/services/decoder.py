"""Flooding sum-product decoder with a pluggable channel-LLR front-end."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from qsc_ldpc.config import settings
from qsc_ldpc.exceptions import ParameterDomainError
from qsc_ldpc.services.code import ParityCheckCode
from qsc_ldpc.services.frontend import FrontEnd
from qsc_ldpc.services.kernels import (
    boxplus_exclusive,
    check_message_sums,
    check_update,
    syndrome_bits,
    variable_update,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@dataclass
class LlrState:
    """Decoder messages after the last completed iteration."""

    channel_llr: FloatArray
    v2c: FloatArray
    c2v: FloatArray
    app_llr: FloatArray


@dataclass
class DecodeResult:
    """Hard decision and bookkeeping of one decoder run."""

    bits: npt.NDArray[np.uint8]
    iterations: int
    converged: bool
    state: LlrState


def check_node_update(incoming: npt.ArrayLike, clip: float | None = None) -> FloatArray:
    """Outgoing check messages: 2*atanh of the product of the other tanh(L/2)."""
    msgs = np.ascontiguousarray(incoming, dtype=np.float64)
    if msgs.ndim != 1 or msgs.size < 2:
        raise ParameterDomainError("check node update needs at least two messages")
    limit = settings().llr_clip if clip is None else clip
    out = np.empty_like(msgs)
    boxplus_exclusive(msgs, out, np.empty_like(msgs))
    return np.clip(out, -limit, limit)


def decode(
    code: ParityCheckCode,
    frontend: FrontEnd,
    received: npt.ArrayLike,
    max_iter: int | None = None,
    refresh_period: int | None = None,
    early_stop: bool = True,
    clip: float | None = None,
) -> DecodeResult:
    """Decode one received word.

    The front-end supplies the first channel LLRs and, every
    ``refresh_period`` iterations, new channel LLRs from the per-bit sums of
    incoming check messages. ``refresh_period=0`` keeps the first LLRs.
    Ties (app LLR of exactly 0) decide for bit 0.
    """
    cfg = settings()
    iterations_cap = cfg.max_iter if max_iter is None else max_iter
    period = cfg.frontend_refresh_period if refresh_period is None else refresh_period
    limit = cfg.llr_clip if clip is None else clip
    if iterations_cap < 1 or period < 0:
        raise ParameterDomainError("need max_iter >= 1 and refresh_period >= 0")
    if frontend.m != code.symbol_width:
        raise ParameterDomainError(
            f"front-end width {frontend.m} != code symbol width {code.symbol_width}"
        )

    y = np.asarray(received, dtype=np.uint8)
    channel = np.clip(frontend.initial_llr(y), -limit, limit)
    c2v = np.zeros(code.n_edges, dtype=np.float64)
    v2c = np.zeros(code.n_edges, dtype=np.float64)
    app = np.empty(code.n_bits, dtype=np.float64)
    extrinsic = np.zeros(code.n_bits, dtype=np.float64)
    work = np.empty(max(int(code.check_degrees.max(initial=1)), 1), dtype=np.float64)
    bits = np.zeros(code.n_bits, dtype=np.uint8)
    parity = np.zeros(code.n_checks, dtype=np.uint8)

    converged = False
    iterations = 0
    for it in range(iterations_cap):
        if period and it and it % period == 0:
            channel = np.clip(frontend.refresh(y, extrinsic), -limit, limit)
        variable_update(channel, c2v, code.bit_ptr, code.bit_edge, v2c, app, limit)
        check_update(v2c, code.check_ptr, c2v, limit, work)
        check_message_sums(c2v, code.bit_ptr, code.bit_edge, extrinsic)
        np.clip(channel + extrinsic, -limit, limit, out=app)
        bits[:] = app < 0.0
        iterations = it + 1
        converged = syndrome_bits(bits, code.check_ptr, code.edge_bit, parity) == 0
        if converged and early_stop:
            break

    logger.debug(f"Decoder finished after {iterations} iterations, converged={converged}")
    return DecodeResult(
        bits=bits.copy(),
        iterations=iterations,
        converged=converged,
        state=LlrState(channel_llr=channel, v2c=v2c, c2v=c2v, app_llr=app),
    )

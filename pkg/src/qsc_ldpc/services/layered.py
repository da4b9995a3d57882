"""Layered successive-decoding analysis of the q-SC.

Layer ``i`` (1-based) sees a BSEC: bit errors of earlier layers are known and
become erasures, so a symbol whose first differing bit lies before layer ``i``
is erased there.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence

from qsc_ldpc.exceptions import ParameterDomainError
from qsc_ldpc.models.channel import ChannelParams, LayerProfile
from qsc_ldpc.services.channel import capacity_bsec

logger = logging.getLogger(__name__)


def layer_params(
    m: int, epsilon: float, order: Sequence[int] | None = None
) -> LayerProfile:
    """Per-layer crossover and erasure probabilities.

    ``order`` names the bit decoded in each layer; the layer parameters do
    not depend on it because every bit position is statistically alike.
    """
    p = ChannelParams(m=m, epsilon=epsilon)
    denom = 2.0**p.m - 1.0
    eps_i: list[float] = []
    delta_i: list[float] = []
    running = 0.0
    for i in range(1, p.m + 1):
        delta_i.append(running)
        e = 2.0 ** (p.m - i) / denom * p.epsilon
        eps_i.append(e)
        running += e
    return LayerProfile(
        m=p.m,
        epsilon=p.epsilon,
        eps_i=tuple(eps_i),
        delta_i=tuple(delta_i),
        order=tuple(order) if order is not None else tuple(range(p.m)),
    )


def layer_capacities(m: int, epsilon: float) -> list[float]:
    """BSEC capacity of each layer, in layer order."""
    profile = layer_params(m, epsilon)
    return [capacity_bsec(d, e) for d, e in zip(profile.delta_i, profile.eps_i)]


def layered_rate_sum(m: int, epsilon: float) -> float:
    """Sum of the layer capacities; equals the q-SC capacity."""
    return sum(layer_capacities(m, epsilon))


def thick_layer_rate(m: int, mu: int, epsilon: float) -> float:
    """Rate of ``mu`` thin layers followed by one layer carrying the other m-mu bits."""
    if not 0 <= mu <= m - 1:
        raise ParameterDomainError(f"mu must lie in [0, {m - 1}], got {mu}")
    caps = layer_capacities(m, epsilon)
    return sum(caps[:mu]) + (m - mu) * caps[mu]


def erasure_weight_identity(m: int, epsilon: float) -> tuple[float, float]:
    """(sum_i delta_i, sum_i (m-i) eps_i); the two agree for every (m, eps)."""
    profile = layer_params(m, epsilon)
    lhs = sum(profile.delta_i)
    rhs = sum((m - i) * e for i, e in enumerate(profile.eps_i, start=1))
    return lhs, rhs


def layered_table(
    m_values: Sequence[int], epsilons: Sequence[float]
) -> list[dict[str, float | int]]:
    """Rows of (m, epsilon, mu, rate) for every thick-layer split.

    ``mu = m - 1`` is the fully layered scheme.
    """
    rows: list[dict[str, float | int]] = []
    for m in m_values:
        for eps in epsilons:
            for mu in range(m):
                rows.append(
                    {"m": m, "epsilon": eps, "mu": mu, "rate": thick_layer_rate(m, mu, eps)}
                )
    logger.debug(f"Tabulated {len(rows)} layered-rate rows")
    return rows

"""Capacity comparison tool: q-SC against its BSC decomposition."""
import logging
from collections.abc import Sequence
from typing import Any

from qsc_ldpc.models.channel import ChannelParams
from qsc_ldpc.services.channel import (
    asymptotic_capacity_loss,
    capacity_bsc,
    capacity_qsc,
    marginal_bsc_eps,
    normalized_capacity,
    normalized_capacity_loss,
    relative_capacity_loss,
    zero_capacity_epsilon,
)


class CapacityTool:
    """Tool for tabulating q-SC and decomposed-BSC capacities."""

    def __init__(self) -> None:
        """Initialize capacity tool with logging."""
        self.logger = logging.getLogger(__name__)

    def capacity_table(
        self, m_values: Sequence[int], epsilons: Sequence[float]
    ) -> list[dict[str, Any]]:
        """One row per (m, epsilon).

        ``beyond_zero_capacity`` flags points past 1 - 2^-m, where the
        formulas are still evaluated but the channel carries nothing.
        """
        self.logger.info(
            f"Capacity table over {len(m_values)} m values x {len(epsilons)} epsilons"
        )
        rows: list[dict[str, Any]] = []
        for m in m_values:
            for eps in epsilons:
                p = ChannelParams(m=m, epsilon=eps)
                eps_bsc = marginal_bsc_eps(p)
                rows.append(
                    {
                        "m": m,
                        "epsilon": eps,
                        "capacity_qsc": capacity_qsc(p),
                        "m_capacity_bsc": m * capacity_bsc(eps_bsc),
                        "eps_bsc": eps_bsc,
                        "normalized_capacity": normalized_capacity(p),
                        "normalized_loss": normalized_capacity_loss(p),
                        "relative_loss": relative_capacity_loss(p),
                        "asymptotic_loss": asymptotic_capacity_loss(eps),
                        "beyond_zero_capacity": eps >= zero_capacity_epsilon(m),
                    }
                )
        return rows

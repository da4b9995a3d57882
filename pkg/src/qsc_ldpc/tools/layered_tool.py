"""Layered-scheme tool: per-layer rates, thick-layer variant and identity checks."""
import logging
from collections.abc import Sequence
from typing import Any

from qsc_ldpc.models.channel import ChannelParams
from qsc_ldpc.services.channel import capacity_qsc
from qsc_ldpc.services.layered import layered_rate_sum, layered_table


class LayeredTool:
    """Tool for the layered successive-decoding rate table."""

    def __init__(self) -> None:
        """Initialize layered tool with logging."""
        self.logger = logging.getLogger(__name__)

    def rate_table(
        self, m_values: Sequence[int], epsilons: Sequence[float]
    ) -> list[dict[str, Any]]:
        """Thick-layer rates with the q-SC capacity and the layered-sum gap."""
        rows: list[dict[str, Any]] = []
        for row in layered_table(m_values, epsilons):
            m, eps = int(row["m"]), float(row["epsilon"])
            capacity = capacity_qsc(ChannelParams(m=m, epsilon=eps))
            rows.append(
                {
                    **row,
                    "capacity_qsc": capacity,
                    "layered_gap": layered_rate_sum(m, eps) - capacity,
                }
            )
        worst = max((abs(r["layered_gap"]) for r in rows), default=0.0)
        self.logger.info(
            f"Layered table: {len(rows)} rows, largest |sum - C_qSC| = {worst:.3e}"
        )
        return rows

"""BER simulation tool."""
import logging
from typing import Any

from qsc_ldpc.models.config import SimConfig
from qsc_ldpc.models.results import BerRecord
from qsc_ldpc.services.code import ParityCheckCode
from qsc_ldpc.services.harness import load_code, run_ber, run_comparison_bsc_decomposition


class SimulateTool:
    """Tool for running BER sweeps, with or without the BSC baseline."""

    def __init__(self) -> None:
        """Initialize simulate tool with logging."""
        self.logger = logging.getLogger(__name__)

    def simulate(self, config: SimConfig) -> list[BerRecord]:
        """Run the configured sweep (baseline when ``config.baseline`` is set)."""
        self.logger.info(
            f"Simulating {len(config.epsilon)} sweep points on the {config.channel} channel"
        )
        return run_ber(config)

    def compare(self, config: SimConfig) -> list[dict[str, Any]]:
        """Front-end and frozen-baseline records side by side on one code."""
        code: ParityCheckCode = load_code(config.code, config.m)
        front = run_ber(config.model_copy(update={"baseline": False}), code)
        base = run_comparison_bsc_decomposition(config, code)
        rows: list[dict[str, Any]] = []
        for f, b in zip(front, base):
            rows.append({**f.model_dump(), "decoder": "front-end"})
            rows.append({**b.model_dump(), "decoder": "baseline"})
        return rows

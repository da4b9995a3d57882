"""Front-end EXIT curve tool."""
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any

import numpy as np

from qsc_ldpc.models.results import ExitCurve
from qsc_ldpc.services.exit import area_identity, exit_curve


class ExitTool:
    """Tool for sampling front-end EXIT curves."""

    def __init__(self) -> None:
        """Initialize EXIT tool with logging."""
        self.logger = logging.getLogger(__name__)

    def curves(
        self,
        m_values: Sequence[int],
        epsilons: Sequence[float],
        models: Sequence[str],
        grid_points: int | None = None,
        n_samples: int | None = None,
        seed: int | None = None,
        workers: int = 1,
    ) -> list[ExitCurve]:
        """One curve per (m, epsilon, model); Monte-Carlo curves get spawned seeds.

        The seeds depend only on the position of the curve, so the output
        does not change with ``workers``.
        """
        points = [(m, eps, model) for m in m_values for eps in epsilons for model in models]
        children = np.random.SeedSequence(seed).spawn(len(points))
        seeds = [
            None if seed is None else int(child.generate_state(1)[0]) for child in children
        ]
        args = (
            [m for m, _, _ in points],
            [eps for _, eps, _ in points],
            [model for _, _, model in points],
            [grid_points] * len(points),
            [n_samples] * len(points),
            seeds,
        )
        if workers > 1 and len(points) > 1:
            self.logger.info(f"Computing {len(points)} EXIT curves on {workers} workers")
            with ProcessPoolExecutor(max_workers=workers) as pool:
                out = list(pool.map(exit_curve, *args))
        else:
            out = [exit_curve(*point) for point in zip(*args)]
        if "bec" in models:
            for m in m_values:
                for eps in epsilons:
                    check = area_identity(m, eps)
                    self.logger.debug(
                        f"Area check m={m}, epsilon={eps}: "
                        f"analytic-capacity={check.difference:.2e}, "
                        f"quadrature error={check.quadrature_error:.2e}"
                    )
        self.logger.info(f"Computed {len(out)} EXIT curves")
        return out

    @staticmethod
    def rows(curves: Sequence[ExitCurve]) -> list[dict[str, Any]]:
        """Flatten curves into CSV rows."""
        return [row for curve in curves for row in curve.rows()]

"""Degree-distribution design tool."""
import logging
from typing import Any

from qsc_ldpc.models.code import DegreeDistribution, DesignProblem
from qsc_ldpc.models.config import DesignSection
from qsc_ldpc.models.results import DesignResult
from qsc_ldpc.services.design import (
    HighsSolver,
    design_sweep,
    optimize_rho,
    predict_threshold,
)


class DesignTool:
    """Tool for optimizing check-degree distributions."""

    def __init__(self, method: str = "highs-ds") -> None:
        """Initialize design tool with an LP backend."""
        self.solver = HighsSolver(method)
        self.logger = logging.getLogger(__name__)

    def _problem(self, section: DesignSection, m: int, epsilon: float, seed: int) -> DesignProblem:
        return DesignProblem(
            m=m,
            epsilon=epsilon,
            d_v=section.d_v,
            d_c_max=section.d_c_max,
            margin=section.margin,
            prior_model=section.prior_model,
            n_samples=section.n_samples,
            seed=seed,
        )

    def optimize(self, section: DesignSection, seed: int = 0) -> DesignResult:
        """Single design point: the first m and epsilon of the section."""
        problem = self._problem(section, section.m[0], section.epsilon[0], seed)
        result = optimize_rho(problem, self.solver)
        if section.threshold:
            threshold = predict_threshold(
                result.distribution,
                problem.m,
                prior_model=problem.prior_model,
                grid_points=problem.grid_points,
                i_max=problem.i_max,
                n_samples=problem.n_samples,
                seed=seed,
            )
            result = result.model_copy(update={"threshold": threshold})
        self.logger.info(
            f"Design at m={problem.m}, epsilon={problem.epsilon}: rate={result.rate:.4f}"
        )
        return result

    def sweep(
        self, section: DesignSection, seed: int = 0, workers: int = 1
    ) -> list[dict[str, Any]]:
        """Optimized rate and C_qSC/m for every (m, epsilon) of the section."""
        base = self._problem(section, section.m[0], section.epsilon[0], seed)
        return design_sweep(
            section.m,
            section.epsilon,
            base,
            self.solver,
            with_threshold=section.threshold,
            workers=workers,
        )

    def threshold(
        self, dist: DegreeDistribution, m: int, prior_model: str = "gaussian", seed: int = 0
    ) -> float:
        """Predicted decoding threshold of a given distribution."""
        return predict_threshold(dist, m, prior_model=prior_model, seed=seed)

"""Check-degree optimization for variable-regular codes on the q-SC.

The variable node and the front-end are merged into one super node whose
EXIT curve ``f`` is built from the J-map and the front-end curve. The check
side is linear in rho, so the tunnel condition over a grid of a-priori
values becomes a set of linear constraints.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import repeat
from typing import Protocol

import numpy as np
import numpy.typing as npt
from scipy.optimize import linprog

from qsc_ldpc.config import settings
from qsc_ldpc.exceptions import (
    InfeasibleDesignError,
    NumericalError,
    ParameterDomainError,
)
from qsc_ldpc.models.channel import ChannelParams
from qsc_ldpc.models.code import DegreeDistribution, DesignProblem
from qsc_ldpc.models.results import DesignResult
from qsc_ldpc.services.channel import (
    normalized_capacity,
    shannon_limit,
    zero_capacity_epsilon,
)
from qsc_ldpc.services.exit import exit_curve, j_table

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# rho entries below this are treated as solver noise and dropped
RHO_FLOOR = 1e-9
SLACK_TOLERANCE = 1e-6


@dataclass
class LpSolution:
    """Outcome of one LP solve."""

    success: bool
    x: FloatArray | None
    message: str


class LpSolver(Protocol):
    """Minimize c @ x subject to A_ub @ x <= b_ub, A_eq @ x == b_eq, x >= 0."""

    def solve(
        self,
        c: FloatArray,
        a_ub: FloatArray,
        b_ub: FloatArray,
        a_eq: FloatArray,
        b_eq: FloatArray,
    ) -> LpSolution:
        """Solve the LP."""
        ...


class HighsSolver:
    """SciPy HiGHS backend (dual simplex by default, interior point on request)."""

    def __init__(self, method: str = "highs-ds") -> None:
        """Pick the HiGHS method."""
        if method not in ("highs", "highs-ds", "highs-ipm"):
            raise ParameterDomainError(f"unsupported HiGHS method {method!r}")
        self.method = method

    def solve(
        self,
        c: FloatArray,
        a_ub: FloatArray,
        b_ub: FloatArray,
        a_eq: FloatArray,
        b_eq: FloatArray,
    ) -> LpSolution:
        """Solve with scipy.optimize.linprog."""
        res = linprog(
            c,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=(0.0, None),
            method=self.method,
        )
        return LpSolution(
            success=bool(res.status == 0),
            x=None if res.x is None else np.asarray(res.x, dtype=np.float64),
            message=str(res.message),
        )


@lru_cache(maxsize=64)
def _front_end_points(
    m: int,
    epsilon: float,
    prior_model: str,
    grid_points: int,
    n_samples: int,
    seed: int,
) -> tuple[FloatArray, FloatArray]:
    model = "gauss" if prior_model == "gaussian" else "bec"
    curve = exit_curve(m, epsilon, model, grid_points, n_samples, seed)
    i_a = np.asarray(curve.i_a)
    # sampling noise can dent the estimate; the true curve is non-decreasing
    i_e = np.maximum.accumulate(np.asarray(curve.i_e))
    return i_a, i_e


class FrontEndCurve:
    """Piecewise-linear front-end transfer function."""

    def __init__(self, i_a: npt.ArrayLike, i_e: npt.ArrayLike) -> None:
        """Keep the sample points."""
        self.i_a = np.asarray(i_a, dtype=np.float64)
        self.i_e = np.asarray(i_e, dtype=np.float64)

    @classmethod
    def for_problem(cls, problem: DesignProblem) -> FrontEndCurve:
        """Front-end curve at the problem's channel and prior model."""
        return cls(
            *_front_end_points(
                problem.m,
                problem.epsilon,
                problem.prior_model,
                problem.grid_points,
                problem.n_samples,
                problem.seed,
            )
        )

    def __call__(self, i_a: npt.ArrayLike) -> FloatArray:
        arr = np.asarray(i_a, dtype=np.float64)
        lo, hi = self.i_a[0], self.i_a[-1]
        if np.any((arr < lo - 1e-12) | (arr > hi + 1e-12)):
            raise ParameterDomainError(
                f"front-end curve sampled on [{lo}, {hi}], asked outside it"
            )
        return np.interp(arr, self.i_a, self.i_e)


def combined_vn_exit(
    i_a_check: npt.ArrayLike,
    problem: DesignProblem,
    curve: FrontEndCurve | None = None,
) -> FloatArray:
    """EXIT of a degree-d_v bit together with its front-end, toward the checks."""
    table = j_table()
    fe = curve if curve is not None else FrontEndCurve.for_problem(problem)
    sigma_a = table.j_inv(i_a_check)
    fe_in = table.j(np.sqrt(problem.d_v) * sigma_a)
    sigma_ch = table.j_inv(fe(fe_in))
    return table.j(np.sqrt((problem.d_v - 1) * sigma_a**2 + sigma_ch**2))


def check_exit(x: npt.ArrayLike, degree: npt.ArrayLike) -> FloatArray:
    """Reversed-axes check-node curve c_d(x) = 1 - J(sqrt(d-1) J^-1(1 - x))."""
    table = j_table()
    d = np.asarray(degree, dtype=np.float64)
    sigma = table.j_inv(1.0 - np.asarray(x, dtype=np.float64))
    return 1.0 - table.j(np.sqrt(d - 1.0) * sigma)


def regular_distribution(d_v: int, d_c: int) -> DegreeDistribution:
    """(d_v, d_c)-regular ensemble."""
    return DegreeDistribution(lambda_={d_v: 1.0}, rho={d_c: 1.0})


def _grid(problem: DesignProblem) -> FloatArray:
    return np.linspace(0.0, problem.i_max, problem.grid_points)


def _check_matrix(f: FloatArray, degrees: FloatArray) -> FloatArray:
    return check_exit(f[:, None], degrees[None, :])


def optimize_rho(
    problem: DesignProblem,
    solver: LpSolver | None = None,
    curve: FrontEndCurve | None = None,
) -> DesignResult:
    """Highest-rate check distribution whose EXIT tunnel stays open by ``margin``."""
    backend = solver if solver is not None else HighsSolver()
    grid = _grid(problem)
    f = combined_vn_exit(grid, problem, curve)
    degrees = np.arange(2, problem.d_c_max + 1, dtype=np.float64)
    coeff = _check_matrix(f, degrees)

    c = 1.0 / degrees
    a_ub = np.vstack([-coeff, c[None, :]])
    b_ub = np.concatenate(
        [-(grid + problem.margin), [(1.0 - problem.min_rate) / problem.d_v]]
    )
    a_eq = np.ones((1, degrees.size))
    b_eq = np.ones(1)

    logger.info(
        f"Optimizing rho: m={problem.m}, epsilon={problem.epsilon}, "
        f"d_v={problem.d_v}, d_c_max={problem.d_c_max}, margin={problem.margin}"
    )
    solution = backend.solve(c, a_ub, b_ub, a_eq, b_eq)
    if not solution.success or solution.x is None:
        binding = grid[f - grid < problem.margin].tolist()
        raise InfeasibleDesignError(
            f"no check distribution opens the tunnel at epsilon={problem.epsilon} "
            f"({solution.message})",
            binding_points=binding,
        )

    x = np.where(solution.x < RHO_FLOOR, 0.0, solution.x)
    x /= x.sum()
    slack = coeff @ x - grid
    min_slack = float(slack.min())
    if min_slack < problem.margin - SLACK_TOLERANCE:
        raise NumericalError(
            "LP solution violates the tunnel constraint",
            {"min_slack": min_slack, "margin": problem.margin},
        )
    rho = {int(d): float(v) for d, v in zip(degrees, x) if v > 0.0}
    dist = DegreeDistribution(lambda_={problem.d_v: 1.0}, rho=rho)
    logger.info(f"Designed rate {dist.rate:.4f} with {len(rho)} check degrees")
    return DesignResult(
        m=problem.m,
        epsilon=problem.epsilon,
        distribution=dist,
        rate=dist.rate,
        min_slack=min_slack,
        normalized_capacity=normalized_capacity(
            ChannelParams(m=problem.m, epsilon=problem.epsilon)
        ),
        shannon_limit=shannon_limit(problem.m, dist.rate),
    )


def tunnel_open(
    dist: DegreeDistribution,
    problem: DesignProblem,
    curve: FrontEndCurve | None = None,
) -> bool:
    """LP constraint test of a given distribution at the problem's channel."""
    if len(dist.lambda_) != 1:
        raise ParameterDomainError("only variable-regular distributions are supported")
    grid = _grid(problem)
    f = combined_vn_exit(grid, problem, curve)
    degrees = np.array(sorted(dist.rho), dtype=np.float64)
    weights = np.array([dist.rho[int(d)] for d in degrees])
    achieved = _check_matrix(f, degrees) @ weights
    return bool(np.all(achieved - grid >= problem.margin))


def predict_threshold(
    dist: DegreeDistribution,
    m: int,
    prior_model: str = "gaussian",
    grid_points: int | None = None,
    i_max: float | None = None,
    n_samples: int | None = None,
    seed: int = 0,
    tol: float = 1e-4,
) -> float:
    """Largest epsilon with an open tunnel (margin 0), by bisection."""
    d_v = next(iter(dist.lambda_))
    d_c_max = max(max(dist.rho), d_v)

    def problem_at(eps: float) -> DesignProblem:
        overrides: dict[str, object] = {
            "m": m,
            "epsilon": eps,
            "d_v": d_v,
            "d_c_max": d_c_max,
            "prior_model": prior_model,
            "margin": 0.0,
            "seed": seed,
        }
        if grid_points is not None:
            overrides["grid_points"] = grid_points
        if i_max is not None:
            overrides["i_max"] = i_max
        if n_samples is not None:
            overrides["n_samples"] = n_samples
        return DesignProblem.model_validate(overrides)

    lo, hi = 0.0, zero_capacity_epsilon(m)
    if not tunnel_open(dist, problem_at(lo)):
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if tunnel_open(dist, problem_at(mid)):
            lo = mid
        else:
            hi = mid
    logger.info(f"Predicted threshold epsilon={lo:.5f} for m={m}")
    return lo


def _sweep_row(
    problem: DesignProblem, solver: LpSolver | None, with_threshold: bool
) -> dict[str, float | int | None]:
    m, eps = problem.m, problem.epsilon
    row: dict[str, float | int | None] = {
        "m": m,
        "epsilon": eps,
        "normalized_capacity": normalized_capacity(ChannelParams(m=m, epsilon=eps)),
        "rate": None,
        "shannon_limit": None,
        "threshold": None,
    }
    try:
        result = optimize_rho(problem, solver)
    except InfeasibleDesignError as e:
        logger.warning(f"Design infeasible at m={m}, epsilon={eps}: {e}")
        return row
    row["rate"] = result.rate
    row["shannon_limit"] = result.shannon_limit
    if with_threshold:
        row["threshold"] = predict_threshold(
            result.distribution,
            m,
            prior_model=problem.prior_model,
            grid_points=problem.grid_points,
            i_max=problem.i_max,
            n_samples=problem.n_samples,
            seed=problem.seed,
        )
    return row


def design_sweep(
    m_values: Sequence[int],
    epsilons: Sequence[float],
    base: DesignProblem | None = None,
    solver: LpSolver | None = None,
    with_threshold: bool = False,
    workers: int = 1,
) -> list[dict[str, float | int | None]]:
    """Optimized rate against C_qSC/m over (m, epsilon), optionally on worker processes."""
    template = base.model_dump() if base is not None else {}
    problems = [
        DesignProblem.model_validate({**template, "m": m, "epsilon": eps})
        for m in m_values
        for eps in epsilons
    ]
    if workers <= 1 or len(problems) == 1:
        return [_sweep_row(p, solver, with_threshold) for p in problems]
    logger.info(f"Design sweep over {len(problems)} points on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(
                _sweep_row,
                problems,
                repeat(solver, len(problems)),
                repeat(with_threshold, len(problems)),
            )
        )

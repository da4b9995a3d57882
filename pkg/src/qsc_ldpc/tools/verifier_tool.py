"""Invariant and oracle verification tool."""
import logging
from collections.abc import Callable
from typing import Any

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom

from qsc_ldpc.models.channel import ChannelParams, QscStarParams
from qsc_ldpc.services.channel import (
    capacity_bsc,
    capacity_qsc,
    marginal_bsc_eps,
    symbol_indices,
    symbols_from_bits,
    symbols_from_indices,
    transition_probabilities,
    transition_probabilities_qsc_star,
    transmit,
    transmit_qsc_star,
)
from qsc_ldpc.services.code import ParityCheckCode, encode
from qsc_ldpc.services.decoder import decode
from qsc_ldpc.services.exit import area_identity, exit_bec
from qsc_ldpc.services.frontend import (
    QscFrontEnd,
    app_llr_direct,
    brute_force_llr,
    brute_force_llr_qsc_star,
    extrinsic_agreement,
    init_llr,
    refresh,
    refresh_qsc_star,
)
from qsc_ldpc.services.kernels import numba_available
from qsc_ldpc.services.layered import erasure_weight_identity, layered_rate_sum

EPSILONS = (0.001, 0.01, 0.05, 0.1, 0.25, 0.4, 0.6)

# chain-shaped Tanner graph for m = 2; the degree-1 checks pin bits 0 and 7
TREE_CHECKS = ((1, 2), (3, 4), (5, 6), (0,), (7,))


def tree_code() -> ParityCheckCode:
    """Cycle-free toy code with N = 8 and two bits per symbol."""
    return ParityCheckCode(8, [list(c) for c in TREE_CHECKS], symbol_width=2)


def codebook(code: ParityCheckCode) -> np.ndarray:
    """All 2^K codewords of a small code, one per row."""
    k = code.dimension
    if k == 0:
        return np.zeros((1, code.n_bits), dtype=np.uint8)
    infos = symbols_from_indices(np.arange(1 << k, dtype=np.int64), k)
    return np.array([encode(code, u) for u in infos], dtype=np.uint8)


def bitwise_map_llr(
    code: ParityCheckCode, received: np.ndarray, p: ChannelParams
) -> np.ndarray:
    """Exact a-posteriori bit LLRs by enumerating the codebook."""
    words = codebook(code)
    row = transition_probabilities(p)
    y = symbols_from_bits(received, p.m)
    log_like = np.array(
        [
            np.log(row[symbol_indices(symbols_from_bits(w, p.m) ^ y)]).sum()
            for w in words
        ]
    )
    out = np.empty(code.n_bits)
    with np.errstate(divide="ignore"):
        for j in range(code.n_bits):
            zero = words[:, j] == 0
            out[j] = logsumexp(log_like[zero]) - logsumexp(log_like[~zero])
    return out


class VerifierTool:
    """Tool for running the invariant and oracle suites."""

    def __init__(self, seed: int = 0) -> None:
        """Initialize verifier tool with logging and a seed for random cases."""
        self.seed = seed
        self.logger = logging.getLogger(__name__)

    def verify(self) -> dict[str, Any]:
        """Run every suite; ``overall_valid`` is True only if all of them pass."""
        suites: list[tuple[str, Callable[[], tuple[float, float]]]] = [
            ("layered_identity", self._layered_identity),
            ("erasure_weight_identity", self._erasure_weights),
            ("area_identity", self._area_identity),
            ("area_quadrature", self._area_quadrature),
            ("exit_anchor", self._exit_anchor),
            ("exit_ordering", self._exit_ordering),
            ("frontend_oracle", self._frontend_oracle),
            ("qsc_star_reduction", self._qsc_star_reduction),
            ("qsc_star_flat_prior", self._qsc_star_flat_prior),
            ("qsc_star_oracle", self._qsc_star_oracle),
            ("transition_rows", self._transition_rows),
            ("channel_statistics", self._channel_statistics),
            ("init_llr", self._init_llr),
            ("exact_map", self._exact_map),
            ("codeword_symmetry", self._codeword_symmetry),
        ]
        results: dict[str, Any] = {
            "overall_valid": True,
            "numba": numba_available(),
            "suites": [],
        }
        if not results["numba"]:
            self.logger.warning("Numba is not importable; kernels run as plain Python")
        for name, suite in suites:
            try:
                error, tolerance = suite()
                valid = bool(error <= tolerance)
                entry = {
                    "name": name,
                    "valid": valid,
                    "max_error": error,
                    "tolerance": tolerance,
                }
            except Exception as e:
                self.logger.error(f"Suite {name} raised: {e}")
                entry = {
                    "name": name,
                    "valid": False,
                    "max_error": None,
                    "tolerance": None,
                    "error": str(e),
                }
                valid = False
            results["suites"].append(entry)
            if not valid:
                results["overall_valid"] = False
                self.logger.warning(f"Suite {name} failed: {entry}")
            else:
                self.logger.info(f"Suite {name} passed (max error {error:.2e})")
        return results

    def _layered_identity(self) -> tuple[float, float]:
        worst = max(
            abs(layered_rate_sum(m, e) - capacity_qsc(ChannelParams(m=m, epsilon=e)))
            for m in range(1, 17)
            for e in EPSILONS
        )
        return worst, 1e-9

    def _erasure_weights(self) -> tuple[float, float]:
        worst = 0.0
        for m in range(1, 17):
            for e in EPSILONS:
                lhs, rhs = erasure_weight_identity(m, e)
                worst = max(worst, abs(lhs - rhs))
        return worst, 1e-12

    def _area_identity(self) -> tuple[float, float]:
        worst = max(
            abs(area_identity(m, e).difference) for m in range(1, 9) for e in EPSILONS
        )
        return worst, 1e-9

    def _area_quadrature(self) -> tuple[float, float]:
        worst = max(
            area_identity(m, e).quadrature_error for m in range(1, 9) for e in EPSILONS
        )
        return worst, 1e-6

    def _exit_anchor(self) -> tuple[float, float]:
        worst = 0.0
        for m in range(1, 9):
            for e in EPSILONS:
                p = ChannelParams(m=m, epsilon=e)
                anchor = float(exit_bec(0.0, m, e))
                worst = max(worst, abs(anchor - capacity_bsc(marginal_bsc_eps(p))))
        return worst, 1e-12

    def _exit_ordering(self) -> tuple[float, float]:
        grid = np.linspace(0.0, 1.0, 101)
        low = np.asarray(exit_bec(grid, 4, 0.25))
        high = np.asarray(exit_bec(grid, 8, 0.25))
        drops = float(max(np.max(-np.diff(low)), np.max(-np.diff(high)), 0.0))
        crossing = float(max(np.max(low - high), 0.0))
        return max(drops, crossing), 0.0

    def _frontend_oracle(self) -> tuple[float, float]:
        rng = np.random.default_rng(self.seed)
        worst = 0.0
        for m in range(1, 7):
            for e in (0.05, 0.25, 0.4):
                p = ChannelParams(m=m, epsilon=e)
                y = rng.integers(0, 2, size=(10_000, m), dtype=np.uint8)
                extr = rng.normal(0.0, 2.0, size=(10_000, m))
                message = refresh(y, extr, p) + extr
                direct = app_llr_direct(y, extr, p)
                brute = brute_force_llr(y, extrinsic_agreement(y, extr), p)
                worst = max(
                    worst,
                    float(np.max(np.abs(message - brute))),
                    float(np.max(np.abs(direct - brute))),
                )
        return worst, 1e-10

    def _qsc_star_reduction(self) -> tuple[float, float]:
        rng = np.random.default_rng(self.seed + 1)
        worst = 0.0
        for m in range(1, 7):
            for e in (0.05, 0.25, 0.4):
                y = rng.integers(0, 2, size=(500, m), dtype=np.uint8)
                extr = rng.normal(0.0, 3.0, size=(500, m))
                star = QscStarParams.from_qsc(m, e)
                gap = refresh_qsc_star(y, extr, star) - refresh(
                    y, extr, ChannelParams(m=m, epsilon=e)
                )
                worst = max(worst, float(np.max(np.abs(gap))))
        return worst, 1e-9

    def _qsc_star_flat_prior(self) -> tuple[float, float]:
        rng = np.random.default_rng(self.seed + 4)
        worst = 0.0
        for m in range(1, 7):
            for e in (0.05, 0.25, 0.4):
                y = rng.integers(0, 2, size=(500, m), dtype=np.uint8)
                eps_cond = tuple(float(v) for v in rng.uniform(0.1, 0.9, size=m))
                skewed = QscStarParams(m=m, epsilon=e, eps_cond=eps_cond)
                flat = refresh_qsc_star(y, np.zeros((500, m)), skewed)
                marginal = np.asarray(skewed.marginal_eps)
                expected = (1.0 - 2.0 * y) * np.log((1.0 - marginal) / marginal)
                worst = max(worst, float(np.max(np.abs(flat - expected))))
        return worst, 1e-12

    def _qsc_star_oracle(self) -> tuple[float, float]:
        rng = np.random.default_rng(self.seed + 5)
        worst = 0.0
        for m in range(1, 7):
            for e in (0.05, 0.25, 0.4):
                eps_cond = tuple(float(v) for v in rng.uniform(0.1, 0.9, size=m))
                p = QscStarParams(m=m, epsilon=e, eps_cond=eps_cond)
                y = rng.integers(0, 2, size=(2000, m), dtype=np.uint8)
                extr = rng.normal(0.0, 2.0, size=(2000, m))
                message = refresh_qsc_star(y, extr, p) + extr
                brute = brute_force_llr_qsc_star(y, extrinsic_agreement(y, extr), p)
                worst = max(worst, float(np.max(np.abs(message - brute))))
        return worst, 1e-9

    def _transition_rows(self) -> tuple[float, float]:
        rng = np.random.default_rng(self.seed + 6)
        worst = 0.0
        for m in range(1, 11):
            for e in EPSILONS:
                row = transition_probabilities(ChannelParams(m=m, epsilon=e))
                eps_cond = tuple(float(v) for v in rng.uniform(0.05, 0.95, size=m))
                star = transition_probabilities_qsc_star(
                    QscStarParams(m=m, epsilon=e, eps_cond=eps_cond)
                )
                worst = max(worst, abs(row.sum() - 1.0), abs(star.sum() - 1.0))
        return worst, 1e-12

    def _channel_statistics(self) -> tuple[float, float]:
        # largest deviation in binomial standard deviations over 10^6 symbols
        n = 1_000_000
        rng = np.random.default_rng(self.seed + 7)
        p = ChannelParams(m=4, epsilon=0.25)
        x = rng.integers(0, 2, size=(n, p.m), dtype=np.uint8)
        errors = int(np.count_nonzero(np.any(transmit(x, p, rng) != x, axis=1)))
        worst = abs(errors - n * p.epsilon) / binom.std(n, p.epsilon)
        star = QscStarParams(m=3, epsilon=0.2, eps_cond=(0.2, 0.5, 0.7))
        x = rng.integers(0, 2, size=(n, star.m), dtype=np.uint8)
        flips = np.count_nonzero(transmit_qsc_star(x, star, rng) != x, axis=0)
        for count, e in zip(flips, star.marginal_eps):
            worst = max(worst, abs(int(count) - n * e) / binom.std(n, e))
        return float(worst), 4.0

    def _init_llr(self) -> tuple[float, float]:
        worst = 0.0
        for m in range(1, 21):
            for e in EPSILONS:
                p = ChannelParams(m=m, epsilon=e)
                eps_bsc = marginal_bsc_eps(p)
                expected = float(np.log((1.0 - eps_bsc) / eps_bsc))
                worst = max(worst, abs(init_llr(p) - expected))
        return worst, 1e-12

    def _exact_map(self) -> tuple[float, float]:
        code = tree_code()
        p = ChannelParams(m=2, epsilon=0.2)
        rng = np.random.default_rng(self.seed + 2)
        worst = 0.0
        for _ in range(20):
            received = rng.integers(0, 2, size=code.n_bits, dtype=np.uint8)
            result = decode(
                code,
                QscFrontEnd(p),
                received,
                max_iter=50,
                refresh_period=1,
                early_stop=False,
            )
            app = result.state.app_llr
            exact = bitwise_map_llr(code, received, p)
            free = np.isfinite(exact)
            worst = max(worst, float(np.max(np.abs(app[free] - exact[free]))))
            # pinned bits saturate; only their decision is compared
            if np.any(app[~free] * np.sign(exact[~free]) <= 0.0):
                worst = np.inf
        return worst, 1e-9

    def _codeword_symmetry(self) -> tuple[float, float]:
        # received + codeword decodes to the same beliefs with the codeword's signs
        code = tree_code()
        p = ChannelParams(m=2, epsilon=0.15)
        rng = np.random.default_rng(self.seed + 3)
        worst = 0.0
        for word in codebook(code):
            received = rng.integers(0, 2, size=code.n_bits, dtype=np.uint8)
            plain = decode(code, QscFrontEnd(p), received, max_iter=10, early_stop=False)
            shifted = decode(
                code, QscFrontEnd(p), received ^ word, max_iter=10, early_stop=False
            )
            signs = 1.0 - 2.0 * word
            gap = shifted.state.app_llr - signs * plain.state.app_llr
            worst = max(worst, float(np.max(np.abs(gap))))
        return worst, 0.0

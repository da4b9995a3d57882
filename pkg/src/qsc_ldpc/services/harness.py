"""Monte-Carlo BER experiments.

Every trial draws from its own generator seeded by (seed, epsilon index,
trial index), and the stopping rule scans trial outcomes in index order, so
the records do not depend on how many worker processes ran the trials.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from qsc_ldpc.exceptions import ParameterDomainError, SymbolConstraintError
from qsc_ldpc.models.channel import ChannelParams, QscStarParams
from qsc_ldpc.models.config import CodeSource, SimConfig
from qsc_ldpc.models.results import BerRecord
from qsc_ldpc.services.channel import (
    bits_from_symbols,
    symbols_from_bits,
    transmit,
    transmit_qsc_star,
)
from qsc_ldpc.services.code import ParityCheckCode, encode, load_alist
from qsc_ldpc.services.construct import peg_construct, validate_symbol_constraint
from qsc_ldpc.services.decoder import decode
from qsc_ldpc.services.frontend import (
    FrontEnd,
    FrozenFrontEnd,
    QscFrontEnd,
    QscStarFrontEnd,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "epsilon",
    "codewords",
    "bits",
    "bit_errors",
    "ber",
    "ber_low",
    "ber_high",
    "frame_errors",
    "fer",
    "symbol_errors",
    "ser",
    "mean_iterations",
    "wall_time",
)


@dataclass(frozen=True)
class TrialOutcome:
    """Error counts of one decoded codeword."""

    bit_errors: int
    symbol_errors: int
    iterations: int


def load_code(source: CodeSource, m: int) -> ParityCheckCode:
    """Read or construct the code and check that no check sees a symbol twice."""
    if source.alist is not None:
        logger.info(f"Loading code from {source.alist}")
        code = load_alist(Path(source.alist).read_text(), symbol_width=m)
    else:
        assert source.construction is not None
        if source.construction.symbol_width != m:
            raise ParameterDomainError(
                f"construction symbol width {source.construction.symbol_width} "
                f"!= simulation m={m}"
            )
        code = peg_construct(source.construction)
    violations = validate_symbol_constraint(code)
    if violations:
        raise SymbolConstraintError(violations)
    return code


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval of an error rate."""
    if trials == 0:
        return 0.0, 1.0
    ci = binomtest(errors, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


class TrialRunner:
    """Runs single trials of one simulation config on one code."""

    def __init__(self, code: ParityCheckCode, config: SimConfig, seed: int) -> None:
        """Bind code and config; the encoder is built here when it is needed."""
        self.logger = logging.getLogger(__name__)
        self.code = code
        self.config = config
        self.seed = seed
        if not config.all_zero:
            _ = code.encoder

    def frontend(self, epsilon: float) -> FrontEnd:
        """Front-end for one sweep point, frozen for the BSC baseline."""
        cfg = self.config
        inner: FrontEnd
        if cfg.channel == "qsc-star":
            assert cfg.eps_cond is not None
            inner = QscStarFrontEnd(
                QscStarParams(m=cfg.m, epsilon=epsilon, eps_cond=tuple(cfg.eps_cond))
            )
        else:
            inner = QscFrontEnd(ChannelParams(m=cfg.m, epsilon=epsilon))
        return FrozenFrontEnd(inner) if cfg.baseline else inner

    def _channel(self, x: np.ndarray, epsilon: float, rng: np.random.Generator) -> np.ndarray:
        cfg = self.config
        if cfg.channel == "qsc-star":
            assert cfg.eps_cond is not None
            params = QscStarParams(m=cfg.m, epsilon=epsilon, eps_cond=tuple(cfg.eps_cond))
            return transmit_qsc_star(x, params, rng)
        return transmit(x, ChannelParams(m=cfg.m, epsilon=epsilon), rng)

    def run(self, eps_index: int, trial: int) -> TrialOutcome:
        """Encode, transmit, decode and count errors for one codeword."""
        cfg = self.config
        epsilon = cfg.epsilon[eps_index]
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, eps_index, trial]))
        if cfg.all_zero:
            codeword = np.zeros(self.code.n_bits, dtype=np.uint8)
        else:
            info = rng.integers(0, 2, size=self.code.dimension, dtype=np.uint8)
            codeword = encode(self.code, info)
        received = self._channel(symbols_from_bits(codeword, cfg.m), epsilon, rng)
        result = decode(
            self.code,
            self.frontend(epsilon),
            bits_from_symbols(received),
            max_iter=cfg.max_iter,
            refresh_period=cfg.frontend_refresh_period,
        )
        wrong = (result.bits != codeword).reshape(-1, cfg.m)
        return TrialOutcome(
            bit_errors=int(wrong.sum()),
            symbol_errors=int(wrong.any(axis=1).sum()),
            iterations=result.iterations,
        )


_worker_runner: TrialRunner | None = None


def _init_worker(code: ParityCheckCode, config: SimConfig, seed: int) -> None:
    global _worker_runner
    _worker_runner = TrialRunner(code, config, seed)


def _run_in_worker(eps_index: int, trial: int) -> TrialOutcome:
    assert _worker_runner is not None
    return _worker_runner.run(eps_index, trial)


class BerSimulator:
    """Sweeps epsilon and collects BER/FER/SER records for one code."""

    def __init__(self, config: SimConfig, code: ParityCheckCode | None = None) -> None:
        """Resolve the seed and the code."""
        self.logger = logging.getLogger(__name__)
        self.config = config
        if config.seed is None:
            self.seed = int(np.random.SeedSequence().entropy % (1 << 63))
            self.logger.warning(
                f"No seed configured; results are not reproducible (drew seed {self.seed})"
            )
        else:
            self.seed = config.seed
        self.code = code if code is not None else load_code(config.code, config.m)
        if self.code.symbol_width != config.m:
            self.code = self.code.with_symbol_width(config.m)
            violations = validate_symbol_constraint(self.code)
            if violations:
                raise SymbolConstraintError(violations)

    def run(self) -> list[BerRecord]:
        """One record per sweep point, in sweep order."""
        runner = TrialRunner(self.code, self.config, self.seed)
        workers = self.config.workers
        if workers == 1:
            return [self._sweep_point(i, runner, None) for i in range(len(self.config.epsilon))]
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(self.code, self.config, self.seed),
        ) as pool:
            return [
                self._sweep_point(i, runner, pool) for i in range(len(self.config.epsilon))
            ]

    def _sweep_point(
        self,
        eps_index: int,
        runner: TrialRunner,
        pool: ProcessPoolExecutor | None,
    ) -> BerRecord:
        cfg = self.config
        epsilon = cfg.epsilon[eps_index]
        self.logger.info(
            f"Simulating epsilon={epsilon} ({'baseline' if cfg.baseline else 'front-end'})"
        )
        start = time.time()
        batch = 1 if pool is None else 4 * cfg.workers
        codewords = bit_errors = symbol_errors = frame_errors = iterations = 0
        done = False
        next_trial = 0
        while not done:
            trials = range(next_trial, min(next_trial + batch, cfg.max_codewords))
            next_trial = trials.stop
            if pool is None:
                outcomes = [runner.run(eps_index, t) for t in trials]
            else:
                outcomes = list(pool.map(_run_in_worker, [eps_index] * len(trials), trials))
            for outcome in outcomes:
                codewords += 1
                bit_errors += outcome.bit_errors
                symbol_errors += outcome.symbol_errors
                frame_errors += int(outcome.bit_errors > 0)
                iterations += outcome.iterations
                if bit_errors >= cfg.min_bit_errors or codewords >= cfg.max_codewords:
                    done = True
                    break

        bits = codewords * self.code.n_bits
        low, high = wilson_interval(bit_errors, bits)
        record = BerRecord(
            epsilon=epsilon,
            codewords=codewords,
            bits=bits,
            bit_errors=bit_errors,
            ber=bit_errors / bits,
            ber_low=low,
            ber_high=high,
            frame_errors=frame_errors,
            fer=frame_errors / codewords,
            symbol_errors=symbol_errors,
            ser=symbol_errors / (codewords * self.code.n_symbols),
            mean_iterations=iterations / codewords,
            wall_time=time.time() - start,
        )
        self.logger.info(
            f"epsilon={epsilon}: BER={record.ber:.3e} over {codewords} codewords "
            f"({bit_errors} bit errors)"
        )
        return record


def run_ber(config: SimConfig, code: ParityCheckCode | None = None) -> list[BerRecord]:
    """BER sweep with the symbol-aware front-end (or the baseline if configured)."""
    return BerSimulator(config, code).run()


def run_comparison_bsc_decomposition(
    config: SimConfig, code: ParityCheckCode | None = None
) -> list[BerRecord]:
    """The same sweep with the front-end frozen at its initial LLRs."""
    return BerSimulator(config.model_copy(update={"baseline": True}), code).run()

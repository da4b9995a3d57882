"""Symbol-constrained progressive edge-growth (PEG) construction."""
from __future__ import annotations

import logging
import math
import time
from collections import Counter

import numpy as np

from qsc_ldpc.exceptions import ConstructionError, ParameterDomainError
from qsc_ldpc.models.code import ConstructionSpec
from qsc_ldpc.models.results import ConstructionReport
from qsc_ldpc.services.code import ParityCheckCode
from qsc_ldpc.services.kernels import girth_search, peg_build

logger = logging.getLogger(__name__)


def round_check_counts(n_edges: int, rho: dict[int, float]) -> dict[int, int]:
    """Integer number of checks per degree with sum_d d * count_d == n_edges.

    Node-perspective counts are floored, one largest-remainder pass spends
    what fits, and any rest goes to the largest support degree that fits, a
    single check of the remaining degree, or a one-step degree bump.
    """
    if n_edges < 1:
        raise ParameterDomainError(f"need at least one edge, got {n_edges}")
    exact = {d: n_edges * f / d for d, f in rho.items() if f > 0.0}
    counts = {d: math.floor(v) for d, v in exact.items()}
    rest = n_edges - sum(d * c for d, c in counts.items())

    for d in sorted(exact, key=lambda k: (-(exact[k] - counts[k]), k)):
        if d <= rest:
            counts[d] += 1
            rest -= d

    support = sorted(exact)
    while rest > 0:
        fitting = [d for d in support if d <= rest]
        if fitting:
            counts[fitting[-1]] += 1
            rest -= fitting[-1]
        elif rest >= 2:
            counts[rest] = counts.get(rest, 0) + 1
            rest = 0
        else:
            d_min = min(d for d, c in counts.items() if c > 0)
            counts[d_min] -= 1
            counts[d_min + 1] = counts.get(d_min + 1, 0) + 1
            rest -= 1
    return {d: c for d, c in sorted(counts.items()) if c > 0}


def target_check_degrees(spec: ConstructionSpec) -> np.ndarray:
    """Target degree of every check; the seed decides which check gets which."""
    counts = round_check_counts(spec.n_bits * spec.d_v, spec.rho)
    degrees = np.repeat(
        np.array(list(counts), dtype=np.int64), np.array(list(counts.values()))
    )
    rng = np.random.default_rng(spec.seed)
    return rng.permutation(degrees)


def peg_construct(spec: ConstructionSpec) -> ParityCheckCode:
    """Grow the Tanner graph edge by edge, never putting two bits of a symbol in one check."""
    target = target_check_degrees(spec)
    too_wide = int(target.max()) > spec.n_symbols
    if too_wide:
        raise ConstructionError(
            f"check degree {int(target.max())} exceeds the {spec.n_symbols} symbols "
            "a check can touch",
            bit=0,
        )
    logger.info(
        f"PEG construction: N={spec.n_bits}, M={target.size}, m={spec.symbol_width}, "
        f"d_v={spec.d_v}, seed={spec.seed}"
    )
    start = time.time()
    vn_adj = np.full((spec.n_bits, spec.d_v), -1, dtype=np.int64)
    cn_adj = np.full((target.size, int(target.max())), -1, dtype=np.int64)
    cn_deg = np.zeros(target.size, dtype=np.int64)
    failed = peg_build(spec.d_v, spec.symbol_width, target, vn_adj, cn_adj, cn_deg)
    if failed >= 0:
        raise ConstructionError(
            "no check with residual capacity is free of this bit's symbol",
            bit=int(failed),
        )
    checks = [cn_adj[c, : cn_deg[c]].tolist() for c in range(target.size)]
    checks = remove_four_cycles(
        spec.n_bits, checks, spec.symbol_width, np.random.default_rng((spec.seed, 1))
    )
    code = ParityCheckCode(spec.n_bits, checks, spec.symbol_width)
    logger.info(f"PEG construction finished in {time.time() - start:.2f}s")
    return code


class _Graph:
    """Mutable set adjacency used by the 4-cycle repair."""

    def __init__(self, n_bits: int, checks: list[list[int]], m: int):
        self.m = m
        self.checks = [set(c) for c in checks]
        self.bits: list[set[int]] = [set() for _ in range(n_bits)]
        for c, members in enumerate(self.checks):
            for b in members:
                self.bits[b].add(c)

    def closes_four_cycle(self, b: int, c: int) -> bool:
        """True if edge (b, c) lies on a cycle of length 4."""
        for other in self.bits[b]:
            if other != c and len(self.checks[other] & self.checks[c]) > 1:
                return True
        return False

    def bad_bits(self) -> list[int]:
        """Bits that lie on at least one 4-cycle."""
        bad = []
        for b, neighbours in enumerate(self.bits):
            seen: set[int] = set()
            for c in neighbours:
                members = self.checks[c] - {b}
                if seen & members:
                    bad.append(b)
                    break
                seen |= members
        return bad

    def symbol_free(self, b: int, c: int, leaving: int) -> bool:
        """Check c holds no bit of b's symbol once ``leaving`` is gone."""
        first = (b // self.m) * self.m
        return all(
            j in (b, leaving) or j not in self.checks[c]
            for j in range(first, first + self.m)
        )

    def move(self, b: int, old: int, new: int) -> None:
        self.checks[old].discard(b)
        self.bits[b].discard(old)
        self.checks[new].add(b)
        self.bits[b].add(new)


def remove_four_cycles(
    n_bits: int,
    checks: list[list[int]],
    m: int,
    rng: np.random.Generator,
    max_tries: int = 4000,
    max_passes: int = 8,
) -> list[list[int]]:
    """Break 4-cycles by swapping edge endpoints.

    A swap replaces edges (b, c1) and (b2, c3) by (b, c3) and (b2, c1). It
    keeps every bit and check degree, must keep the symbol constraint and
    is only kept when neither new edge closes a 4-cycle, so the number of
    4-cycles strictly drops. Graphs where no such swap exists come back
    unchanged.
    """
    graph = _Graph(n_bits, checks, m)
    bad = graph.bad_bits()
    if not bad:
        return checks
    initial = len(bad)
    edges = [(b, c) for c, members in enumerate(checks) for b in members]
    where = {edge: k for k, edge in enumerate(edges)}
    for _ in range(max_passes):
        swapped = False
        for b in bad:
            for c1 in sorted(graph.bits[b]):
                if c1 not in graph.bits[b] or not graph.closes_four_cycle(b, c1):
                    continue
                for k in rng.integers(0, len(edges), size=max_tries):
                    b2, c3 = edges[k]
                    if (
                        b2 == b
                        or c3 == c1
                        or c3 in graph.bits[b]
                        or c1 in graph.bits[b2]
                        or not graph.symbol_free(b, c3, b2)
                        or not graph.symbol_free(b2, c1, b)
                    ):
                        continue
                    graph.move(b, c1, c3)
                    graph.move(b2, c3, c1)
                    if graph.closes_four_cycle(b, c3) or graph.closes_four_cycle(b2, c1):
                        graph.move(b2, c1, c3)
                        graph.move(b, c3, c1)
                        continue
                    k1 = where.pop((b, c1))
                    where.pop((b2, c3))
                    edges[k1] = (b, c3)
                    edges[k] = (b2, c1)
                    where[(b, c3)] = k1
                    where[(b2, c1)] = int(k)
                    swapped = True
                    break
        bad = graph.bad_bits()
        if not bad or not swapped:
            break
    logger.info(f"4-cycle repair: {initial} bits on 4-cycles before, {len(bad)} after")
    return [sorted(members) for members in graph.checks]


def validate_symbol_constraint(code: ParityCheckCode) -> list[tuple[int, int]]:
    """Every (check, symbol) pair with two or more incident bits."""
    if code.n_edges == 0:
        return []
    pairs = np.stack([code.edge_check, code.edge_bit // code.symbol_width], axis=1)
    unique, counts = np.unique(pairs, axis=0, return_counts=True)
    return [(int(c), int(s)) for c, s in unique[counts >= 2]]


def girth(code: ParityCheckCode) -> int | None:
    """Length of the shortest cycle, or None for a cycle-free graph."""
    value = girth_search(
        code.n_bits, code.bit_ptr, code.bit_check, code.check_ptr, code.edge_bit
    )
    return None if value < 0 else int(value)


def _histogram(degrees: np.ndarray) -> dict[int, int]:
    return dict(sorted(Counter(int(d) for d in degrees).items()))


def construction_report(code: ParityCheckCode, spec: ConstructionSpec) -> ConstructionReport:
    """Degree histograms, girth and constraint check of a constructed code."""
    return ConstructionReport(
        n_bits=code.n_bits,
        n_checks=code.n_checks,
        symbol_width=code.symbol_width,
        seed=spec.seed,
        variable_degrees=_histogram(code.bit_degrees),
        check_degrees=_histogram(code.check_degrees),
        target_check_degrees=round_check_counts(spec.n_bits * spec.d_v, spec.rho),
        girth=girth(code),
        violations=validate_symbol_constraint(code),
        rate=1.0 - code.n_checks / code.n_bits,
    )

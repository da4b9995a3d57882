"""Sparse parity-check codes, alist exchange format and GF(2) encoding."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy import sparse

from qsc_ldpc.exceptions import (
    AlistParseError,
    InconsistentDegreeError,
    ParameterDomainError,
)
from qsc_ldpc.services.kernels import syndrome_bits

logger = logging.getLogger(__name__)

IndexArray = npt.NDArray[np.int64]
BitArray = npt.NDArray[np.uint8]


class GF2Encoder:
    """Systematic encoder from the reduced row echelon form of H.

    Rows are packed eight columns per byte and padded to whole 64-bit words;
    column tests use the byte view and row additions XOR the word view.
    """

    def __init__(self, dense_h: npt.ArrayLike) -> None:
        """Eliminate H over GF(2) and keep the pivot/information split."""
        h = np.asarray(dense_h, dtype=np.uint8) & 1
        n_rows, n_cols = h.shape
        packed = np.packbits(h, axis=1)
        width = -(-packed.shape[1] // 8) * 8
        rows = np.zeros((n_rows, width), dtype=np.uint8)
        rows[:, : packed.shape[1]] = packed
        words = rows.view(np.uint64)

        pivots: list[int] = []
        r = 0
        for col in range(n_cols):
            if r == n_rows:
                break
            byte, mask = col >> 3, np.uint8(0x80 >> (col & 7))
            below = np.flatnonzero(rows[r:, byte] & mask)
            if below.size == 0:
                continue
            p = r + int(below[0])
            if p != r:
                words[[r, p]] = words[[p, r]]
            hits = np.flatnonzero(rows[:, byte] & mask)
            hits = hits[hits != r]
            # columns left of ``col`` are already zero in row r
            w0 = col >> 6
            words[hits, w0:] ^= words[r, w0:]
            pivots.append(col)
            r += 1

        self.n_bits = n_cols
        self.rank = r
        self.pivot_cols: IndexArray = np.asarray(pivots, dtype=np.int64)
        mask_info = np.ones(n_cols, dtype=bool)
        mask_info[self.pivot_cols] = False
        self.info_cols: IndexArray = np.flatnonzero(mask_info).astype(np.int64)
        reduced = np.unpackbits(rows[:r], axis=1, count=n_cols)
        self.parity_map: BitArray = np.ascontiguousarray(reduced[:, self.info_cols])

    @property
    def dimension(self) -> int:
        """Number of information bits K = N - rank(H)."""
        return int(self.info_cols.size)

    def encode(self, info_bits: npt.ArrayLike) -> BitArray:
        """Codeword carrying ``info_bits`` on the information columns."""
        u = np.asarray(info_bits, dtype=np.uint8)
        if u.shape != (self.dimension,):
            raise ParameterDomainError(
                f"expected {self.dimension} information bits, got shape {u.shape}"
            )
        c = np.zeros(self.n_bits, dtype=np.uint8)
        c[self.info_cols] = u
        # uint8 wraparound is modulo 256, so the low bit is still the parity
        c[self.pivot_cols] = (self.parity_map @ u) & 1
        return c


class ParityCheckCode:
    """Binary LDPC code given by the bit lists of its parity checks.

    Bit ``j`` belongs to symbol ``j // symbol_width``. The structure is
    immutable after construction; the encoder is derived on first use.
    """

    def __init__(
        self,
        n_bits: int,
        checks: Sequence[Sequence[int]],
        symbol_width: int = 1,
    ) -> None:
        """Build the check- and bit-side edge indices."""
        if n_bits < 1:
            raise ParameterDomainError(f"code needs at least one bit, got {n_bits}")
        if symbol_width < 1 or n_bits % symbol_width:
            raise ParameterDomainError(
                f"symbol width {symbol_width} does not divide N={n_bits}"
            )
        self.n_bits = n_bits
        self.n_checks = len(checks)
        self.symbol_width = symbol_width

        rows = [sorted(int(b) for b in row) for row in checks]
        for c, row in enumerate(rows):
            if not row:
                raise ParameterDomainError(f"check {c} is empty")
            if len(set(row)) != len(row):
                raise ParameterDomainError(f"check {c} lists a bit twice")
            if row[0] < 0 or row[-1] >= n_bits:
                raise ParameterDomainError(f"check {c} has a bit outside 0..{n_bits - 1}")
        degrees = np.fromiter((len(r) for r in rows), dtype=np.int64, count=len(rows))
        self.check_ptr: IndexArray = np.zeros(self.n_checks + 1, dtype=np.int64)
        np.cumsum(degrees, out=self.check_ptr[1:])
        self.edge_bit: IndexArray = np.fromiter(
            (b for row in rows for b in row), dtype=np.int64, count=int(degrees.sum())
        )
        self.edge_check: IndexArray = np.repeat(
            np.arange(self.n_checks, dtype=np.int64), degrees
        )

        bit_deg = np.bincount(self.edge_bit, minlength=n_bits)
        if np.any(bit_deg == 0):
            lonely = np.flatnonzero(bit_deg == 0)
            raise ParameterDomainError(
                f"every bit needs a check; unchecked bits: {lonely[:10].tolist()}"
            )
        self.bit_ptr: IndexArray = np.zeros(n_bits + 1, dtype=np.int64)
        np.cumsum(bit_deg, out=self.bit_ptr[1:])
        # stable sort keeps the edges of each bit in check order
        self.bit_edge: IndexArray = np.argsort(self.edge_bit, kind="stable").astype(
            np.int64
        )
        self.bit_check: IndexArray = self.edge_check[self.bit_edge]

    @classmethod
    def from_dense(cls, dense_h: npt.ArrayLike, symbol_width: int = 1) -> ParityCheckCode:
        """Code from a dense 0/1 matrix of shape (M, N)."""
        h = np.asarray(dense_h) & 1
        checks = [np.flatnonzero(row).tolist() for row in h]
        return cls(h.shape[1], checks, symbol_width)

    def with_symbol_width(self, symbol_width: int) -> ParityCheckCode:
        """Same graph, read with another symbol width."""
        return ParityCheckCode(self.n_bits, self.check_lists(), symbol_width)

    @property
    def n_edges(self) -> int:
        """Number of ones in H."""
        return int(self.edge_bit.size)

    @property
    def n_symbols(self) -> int:
        """N / m."""
        return self.n_bits // self.symbol_width

    @property
    def check_degrees(self) -> IndexArray:
        """Degree of every check."""
        return np.diff(self.check_ptr)

    @property
    def bit_degrees(self) -> IndexArray:
        """Degree of every bit."""
        return np.diff(self.bit_ptr)

    def check_lists(self) -> list[list[int]]:
        """Bits of every check, ascending."""
        return [
            self.edge_bit[self.check_ptr[c] : self.check_ptr[c + 1]].tolist()
            for c in range(self.n_checks)
        ]

    def bit_lists(self) -> list[list[int]]:
        """Checks of every bit, ascending."""
        return [
            self.bit_check[self.bit_ptr[b] : self.bit_ptr[b + 1]].tolist()
            for b in range(self.n_bits)
        ]

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        """H as a SciPy CSR matrix."""
        data = np.ones(self.n_edges, dtype=np.uint8)
        return sparse.csr_matrix(
            (data, self.edge_bit, self.check_ptr), shape=(self.n_checks, self.n_bits)
        )

    def to_dense(self) -> BitArray:
        """H as a dense uint8 matrix."""
        return self.matrix.toarray().astype(np.uint8)

    @cached_property
    def encoder(self) -> GF2Encoder:
        """Systematic encoder, built on first access."""
        enc = GF2Encoder(self.to_dense())
        logger.debug(
            f"GF(2) elimination: N={self.n_bits}, M={self.n_checks}, rank={enc.rank}"
        )
        return enc

    @property
    def dimension(self) -> int:
        """K = N - rank(H)."""
        return self.encoder.dimension

    @property
    def rate(self) -> float:
        """K / N."""
        return self.dimension / self.n_bits

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityCheckCode):
            return NotImplemented
        return (
            self.n_bits == other.n_bits
            and self.symbol_width == other.symbol_width
            and np.array_equal(self.check_ptr, other.check_ptr)
            and np.array_equal(self.edge_bit, other.edge_bit)
        )

    def __hash__(self) -> int:
        return hash((self.n_bits, self.symbol_width, self.edge_bit.tobytes()))

    def __repr__(self) -> str:
        return (
            f"ParityCheckCode(n_bits={self.n_bits}, n_checks={self.n_checks}, "
            f"symbol_width={self.symbol_width}, n_edges={self.n_edges})"
        )


def encode(code: ParityCheckCode, info_bits: npt.ArrayLike) -> BitArray:
    """Codeword of ``code`` carrying ``info_bits``."""
    return code.encoder.encode(info_bits)


def syndrome(code: ParityCheckCode, bits: npt.ArrayLike) -> BitArray:
    """H * bits over GF(2)."""
    x = np.asarray(bits, dtype=np.uint8) & 1
    if x.shape != (code.n_bits,):
        raise ParameterDomainError(f"expected {code.n_bits} bits, got shape {x.shape}")
    out = np.zeros(code.n_checks, dtype=np.uint8)
    syndrome_bits(x, code.check_ptr, code.edge_bit, out)
    return out


def _parse_ints(text: str, line_no: int) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as e:
        raise AlistParseError(f"expected integers: {e}", line_no) from e


def _read_adjacency(
    entry: tuple[int, list[int]], degree: int, max_degree: int, limit: int
) -> list[int]:
    line_no, values = entry
    if len(values) not in (degree, max_degree) or (
        len(values) == max_degree and any(values[degree:])
    ):
        raise AlistParseError(
            f"expected {degree} entries (or {max_degree} zero-padded), got {values}",
            line_no,
        )
    listed = values[:degree]
    if any(not 1 <= v <= limit for v in listed):
        raise AlistParseError(f"entries must lie in 1..{limit}, got {listed}", line_no)
    if len(set(listed)) != len(listed):
        raise AlistParseError(f"duplicate entry in {listed}", line_no)
    return [v - 1 for v in listed]


def load_alist(text: str, symbol_width: int = 1) -> ParityCheckCode:
    """Parse alist text (N M / max degrees / degrees / column and row lists)."""
    lines = [
        (no, _parse_ints(raw, no))
        for no, raw in enumerate(text.splitlines(), start=1)
        if raw.strip()
    ]
    if len(lines) < 4:
        raise AlistParseError("truncated header", len(text.splitlines()) + 1)

    def header(idx: int, count: int) -> list[int]:
        no, values = lines[idx]
        if len(values) != count:
            raise AlistParseError(f"expected {count} integers, got {len(values)}", no)
        return values

    n_bits, n_checks = header(0, 2)
    max_col, max_row = header(1, 2)
    col_deg = header(2, n_bits)
    row_deg = header(3, n_checks)
    for idx, (degs, cap) in ((2, (col_deg, max_col)), (3, (row_deg, max_row))):
        if any(d < 1 or d > cap for d in degs):
            raise AlistParseError(
                f"degrees must lie in 1..{cap} (the declared maximum)", lines[idx][0]
            )
    expected = 4 + n_bits + n_checks
    if len(lines) != expected:
        raise AlistParseError(
            f"expected {n_bits} column and {n_checks} row lists, "
            f"found {len(lines) - 4} lists",
            lines[-1][0] if len(lines) > expected else len(text.splitlines()) + 1,
        )

    cols = [
        _read_adjacency(lines[4 + j], col_deg[j], max_col, n_checks)
        for j in range(n_bits)
    ]
    rows = [
        _read_adjacency(lines[4 + n_bits + i], row_deg[i], max_row, n_bits)
        for i in range(n_checks)
    ]
    from_cols = sorted((c, b) for b, cs in enumerate(cols) for c in cs)
    from_rows = sorted((c, b) for c, bs in enumerate(rows) for b in bs)
    if from_cols != from_rows:
        mismatch = sorted(set(from_cols).symmetric_difference(from_rows))[:5]
        raise InconsistentDegreeError(
            f"column and row lists disagree on (check, bit) entries {mismatch}"
        )
    return ParityCheckCode(n_bits, rows, symbol_width)


def save_alist(code: ParityCheckCode) -> str:
    """Canonical alist text: ascending 1-based lists, zero padded to the maximum degree."""
    col_deg = code.bit_degrees
    row_deg = code.check_degrees
    max_col = int(col_deg.max())
    max_row = int(row_deg.max()) if code.n_checks else 0

    def padded(values: list[int], width: int) -> str:
        items = [v + 1 for v in values] + [0] * (width - len(values))
        return " ".join(str(v) for v in items)

    out = [
        f"{code.n_bits} {code.n_checks}",
        f"{max_col} {max_row}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    out.extend(padded(cs, max_col) for cs in code.bit_lists())
    out.extend(padded(bs, max_row) for bs in code.check_lists())
    return "\n".join(out) + "\n"

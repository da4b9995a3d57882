"""Unit tests for parity-check codes, encoding and alist I/O."""

import numpy as np
import pytest

from qsc_ldpc.exceptions import (
    AlistParseError,
    InconsistentDegreeError,
    ParameterDomainError,
)
from qsc_ldpc.services.code import (
    GF2Encoder,
    ParityCheckCode,
    encode,
    load_alist,
    save_alist,
    syndrome,
)
from tests.utils.factories import SMALL_H, random_sparse_code

# N=4, M=2: check 0 = {0, 1, 2}, check 1 = {2, 3}
ALIST_LINES = [
    "4 2",
    "2 3",
    "1 1 2 1",
    "3 2",
    "1 0",
    "1 0",
    "1 2",
    "2 0",
    "1 2 3",
    "3 4 0",
]


def _alist(lines):
    return "\n".join(lines) + "\n"


@pytest.mark.unit
class TestParityCheckCode:
    """Graph structure of a code."""

    def test_dense_structure(self, toy_code):
        """Degrees and dense view come from the check lists."""
        assert toy_code.n_bits == 12
        assert toy_code.n_checks == 6
        assert toy_code.n_edges == 24
        assert np.all(toy_code.bit_degrees == 2)
        assert np.array_equal(toy_code.to_dense(), np.array(SMALL_H, dtype=np.uint8))

    def test_bit_lists_are_transposed_check_lists(self, toy_tree):
        """bit_lists inverts check_lists."""
        assert toy_tree.bit_lists() == [[3], [0], [0], [1], [1], [2], [2], [4]]
        assert toy_tree.n_symbols == 4

    def test_unchecked_bit_rejected(self):
        """Every bit needs at least one check."""
        with pytest.raises(ParameterDomainError, match="unchecked"):
            ParityCheckCode(3, [[0, 1]])

    def test_symbol_width_must_divide(self):
        """N must be a multiple of the symbol width."""
        with pytest.raises(ParameterDomainError):
            ParityCheckCode(3, [[0, 1, 2]], symbol_width=2)

    def test_empty_check_rejected(self):
        """A check without bits is not a parity constraint."""
        with pytest.raises(ParameterDomainError, match="check 1 is empty"):
            ParityCheckCode(3, [[0, 1, 2], []])

    def test_duplicate_bit_rejected(self):
        """A check lists each bit once."""
        with pytest.raises(ParameterDomainError):
            ParityCheckCode(2, [[0, 0, 1]])

    def test_with_symbol_width_keeps_graph(self, toy_code):
        """Reinterpreting the symbol width keeps H."""
        wide = toy_code.with_symbol_width(3)
        assert wide.n_symbols == 4
        assert np.array_equal(wide.to_dense(), toy_code.to_dense())
        assert wide != toy_code
        assert wide.with_symbol_width(1) == toy_code


@pytest.mark.unit
class TestEncoding:
    """GF(2) elimination and systematic encoding."""

    def test_dimension(self, toy_code):
        """SMALL_H has rank 5, so K = 7."""
        assert toy_code.encoder.rank == 5
        assert toy_code.dimension == 7
        assert toy_code.rate == pytest.approx(7 / 12)

    def test_codebook_satisfies_checks(self, toy_code):
        """All 2^K codewords have zero syndrome and are distinct."""
        words = set()
        for index in range(1 << toy_code.dimension):
            info = np.array([(index >> i) & 1 for i in range(7)], dtype=np.uint8)
            word = encode(toy_code, info)
            assert not syndrome(toy_code, word).any()
            assert np.array_equal(word[toy_code.encoder.info_cols], info)
            words.add(word.tobytes())
        assert len(words) == 1 << 7

    def test_random_code_encoding(self):
        """Encoder works past one 64-bit word of columns."""
        code = random_sparse_code(150, 75, 6, seed=5)
        rng = np.random.default_rng(0)
        for _ in range(5):
            info = rng.integers(0, 2, size=code.dimension, dtype=np.uint8)
            assert not syndrome(code, encode(code, info)).any()

    def test_full_rank_identity(self):
        """Identity H leaves only the zero codeword."""
        enc = GF2Encoder(np.eye(4, dtype=np.uint8))
        assert enc.dimension == 0
        assert enc.encode(np.zeros(0, dtype=np.uint8)).tolist() == [0, 0, 0, 0]

    def test_wrong_info_length(self, toy_code):
        """Info words must have K bits."""
        with pytest.raises(ParameterDomainError):
            encode(toy_code, np.zeros(3, dtype=np.uint8))

    def test_syndrome_matches_dense_product(self, toy_code, rng):
        """Kernel syndrome agrees with H x mod 2."""
        h = toy_code.to_dense().astype(np.int64)
        for _ in range(10):
            x = rng.integers(0, 2, size=12, dtype=np.uint8)
            assert np.array_equal(syndrome(toy_code, x), (h @ x) % 2)

    def test_syndrome_length_checked(self, toy_code):
        """Words must have N bits."""
        with pytest.raises(ParameterDomainError):
            syndrome(toy_code, np.zeros(5, dtype=np.uint8))


@pytest.mark.unit
class TestAlist:
    """alist parsing and writing."""

    def test_parse(self):
        """Column and row lists give the expected checks."""
        code = load_alist(_alist(ALIST_LINES))
        assert code.check_lists() == [[0, 1, 2], [2, 3]]

    def test_canonical_text_survives(self):
        """Canonical text is written back unchanged."""
        text = _alist(ALIST_LINES)
        assert save_alist(load_alist(text)) == text

    def test_saved_code_reloads(self, toy_tree):
        """A saved code reloads to the same graph."""
        again = load_alist(save_alist(toy_tree), symbol_width=2)
        assert again == toy_tree

    def test_unpadded_lists_accepted(self):
        """Lists may omit the zero padding."""
        lines = list(ALIST_LINES)
        lines[4] = "1"
        lines[9] = "3 4"
        assert load_alist(_alist(lines)).n_edges == 5

    def test_nonzero_padding_reports_line(self):
        """Entries past the degree must be zero."""
        lines = list(ALIST_LINES)
        lines[9] = "3 4 1"
        with pytest.raises(AlistParseError) as exc_info:
            load_alist(_alist(lines))
        assert exc_info.value.line == 10

    def test_non_integer_reports_line(self):
        """Tokens must be integers."""
        lines = list(ALIST_LINES)
        lines[2] = "1 x 2 1"
        with pytest.raises(AlistParseError) as exc_info:
            load_alist(_alist(lines))
        assert exc_info.value.line == 3

    def test_degree_above_maximum(self):
        """Declared degrees may not exceed the declared maximum."""
        lines = list(ALIST_LINES)
        lines[3] = "4 2"
        with pytest.raises(AlistParseError) as exc_info:
            load_alist(_alist(lines))
        assert exc_info.value.line == 4

    def test_empty_check_reports_line(self):
        """A zero row degree is rejected on the degree line."""
        lines = ["4 3", "2 3", "1 1 2 1", "3 2 0", *ALIST_LINES[4:], "0 0 0"]
        with pytest.raises(AlistParseError) as exc_info:
            load_alist(_alist(lines))
        assert exc_info.value.line == 4

    def test_missing_lists(self):
        """A truncated file is reported."""
        with pytest.raises(AlistParseError, match="row lists"):
            load_alist(_alist(ALIST_LINES[:-1]))

    def test_truncated_header(self):
        """Fewer than four header lines cannot be parsed."""
        with pytest.raises(AlistParseError):
            load_alist("4 2\n2 3\n")

    def test_out_of_range_entry(self):
        """Indices are 1-based and bounded."""
        lines = list(ALIST_LINES)
        lines[7] = "3 0"
        with pytest.raises(AlistParseError) as exc_info:
            load_alist(_alist(lines))
        assert exc_info.value.line == 8

    def test_column_row_disagreement(self):
        """Column lists that contradict row lists are inconsistent."""
        lines = list(ALIST_LINES)
        lines[7] = "1 0"
        with pytest.raises(InconsistentDegreeError):
            load_alist(_alist(lines))

"""Unit tests for the verifier tool."""

import logging
from contextlib import ExitStack
from unittest.mock import patch

import pytest

from qsc_ldpc.tools.verifier_tool import VerifierTool

SUITES = [
    "_layered_identity",
    "_erasure_weights",
    "_area_identity",
    "_area_quadrature",
    "_exit_anchor",
    "_exit_ordering",
    "_frontend_oracle",
    "_qsc_star_reduction",
    "_qsc_star_flat_prior",
    "_qsc_star_oracle",
    "_transition_rows",
    "_channel_statistics",
    "_init_llr",
    "_exact_map",
    "_codeword_symmetry",
]


def _patched(stack, **overrides):
    """Patch every suite to pass unless overridden."""
    for name in SUITES:
        kwargs = overrides.get(name, {"return_value": (0.0, 1e-9)})
        stack.enter_context(patch.object(VerifierTool, name, **kwargs))


@pytest.mark.unit
@pytest.mark.tools
class TestVerifierReport:
    """Report structure with patched suites."""

    @pytest.fixture
    def verifier_tool(self):
        """Create verifier tool instance."""
        return VerifierTool(seed=1)

    def test_all_pass(self, verifier_tool):
        """Every suite shows up once and the report is valid."""
        with ExitStack() as stack:
            _patched(stack)
            report = verifier_tool.verify()
        assert report["overall_valid"] is True
        assert len(report["suites"]) == len(SUITES)
        assert all(s["valid"] for s in report["suites"])
        assert isinstance(report["numba"], bool)

    def test_tolerance_exceeded(self, verifier_tool):
        """One failing suite invalidates the report."""
        with ExitStack() as stack:
            _patched(stack, _area_identity={"return_value": (1e-3, 1e-9)})
            report = verifier_tool.verify()
        assert report["overall_valid"] is False
        failed = [s for s in report["suites"] if not s["valid"]]
        assert [s["name"] for s in failed] == ["area_identity"]
        assert failed[0]["max_error"] == 1e-3

    def test_raising_suite(self, verifier_tool, caplog):
        """An exception is recorded and logged, and the other suites still run."""
        with ExitStack() as stack:
            _patched(stack, _exact_map={"side_effect": RuntimeError("boom")})
            with caplog.at_level(logging.ERROR):
                report = verifier_tool.verify()
        assert report["overall_valid"] is False
        entry = next(s for s in report["suites"] if s["name"] == "exact_map")
        assert entry["error"] == "boom"
        assert entry["max_error"] is None
        assert len(report["suites"]) == len(SUITES)
        assert "Suite exact_map raised: boom" in caplog.text

    def test_missing_numba_is_reported(self, verifier_tool, caplog):
        """Without numba the report says so and a warning is logged."""
        with ExitStack() as stack:
            _patched(stack)
            target = "qsc_ldpc.tools.verifier_tool.numba_available"
            stack.enter_context(patch(target, return_value=False))
            with caplog.at_level(logging.WARNING):
                report = verifier_tool.verify()
        assert report["numba"] is False
        assert "Numba is not importable" in caplog.text


@pytest.mark.unit
@pytest.mark.tools
class TestVerifierSuites:
    """Individual suites on the real numerics."""

    @pytest.mark.parametrize(
        "suite",
        [
            "_layered_identity",
            "_init_llr",
            "_exit_anchor",
            "_qsc_star_reduction",
            "_transition_rows",
        ],
    )
    def test_suite_passes(self, suite):
        """Closed-form suites meet their tolerance."""
        error, tolerance = getattr(VerifierTool(seed=0), suite)()
        assert error <= tolerance

    def test_codeword_symmetry_is_exact(self):
        """Decoding is exactly symmetric in the codeword."""
        error, tolerance = VerifierTool(seed=0)._codeword_symmetry()
        assert tolerance == 0.0
        assert error == 0.0


@pytest.mark.unit
@pytest.mark.slow
@pytest.mark.tools
class TestVerifierFullRun:
    """All suites on the real numerics."""

    def test_overall_valid(self):
        """The shipped implementation passes its own verification."""
        report = VerifierTool(seed=0).verify()
        failed = [s for s in report["suites"] if not s["valid"]]
        assert failed == []
        assert report["overall_valid"] is True


@pytest.mark.unit
@pytest.mark.slow
@pytest.mark.tools
class TestVerifierStatistics:
    """Sampling suites over 10^6 symbols."""

    def test_channel_statistics_within_four_sigma(self):
        """Symbol and bit error counts stay within four standard deviations."""
        error, tolerance = VerifierTool(seed=0)._channel_statistics()
        assert tolerance == 4.0
        assert error <= tolerance

    def test_qsc_star_oracle(self):
        """Message form agrees with q-SC* enumeration."""
        error, tolerance = VerifierTool(seed=0)._qsc_star_oracle()
        assert error <= tolerance

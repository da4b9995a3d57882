"""Unit tests for the construct tool."""

import logging

import pytest

from qsc_ldpc.services.code import load_alist
from qsc_ldpc.tools.construct_tool import ConstructTool
from tests.utils.factories import ConstructionSpecFactory


@pytest.mark.unit
@pytest.mark.tools
class TestConstructTool:
    """Test cases for code construction."""

    def test_construct_and_report(self):
        """Returns the code with a matching report."""
        code, report = ConstructTool().construct(ConstructionSpecFactory.create())
        assert report.n_bits == code.n_bits == 8
        assert report.n_checks == code.n_checks
        assert report.violations == []

    def test_writes_alist(self, temp_dir):
        """The alist file reloads to the constructed code."""
        path = temp_dir / "code.alist"
        spec = ConstructionSpecFactory.create()
        code, _ = ConstructTool().construct(spec, alist_path=path)
        assert load_alist(path.read_text(), symbol_width=2) == code

    def test_logs_summary(self, caplog):
        """Construction is logged at INFO."""
        with caplog.at_level(logging.INFO, logger="qsc_ldpc.tools.construct_tool"):
            ConstructTool().construct(ConstructionSpecFactory.create())
        assert "Constructed N=8" in caplog.text

"""Unit tests for the EXIT tool."""

import logging

import pytest

from qsc_ldpc.tools.exit_tool import ExitTool


@pytest.mark.unit
@pytest.mark.tools
class TestExitTool:
    """Test cases for EXIT curve sampling."""

    @pytest.fixture
    def exit_tool(self):
        """Create EXIT tool instance."""
        return ExitTool()

    def test_one_curve_per_combination(self, exit_tool):
        """Curves come in (m, epsilon, model) order."""
        curves = exit_tool.curves(
            [2, 4], [0.1], ["bec", "bec-mc"], grid_points=5, n_samples=200, seed=1
        )
        assert [(c.m, c.model) for c in curves] == [
            (2, "bec"),
            (2, "bec-mc"),
            (4, "bec"),
            (4, "bec-mc"),
        ]
        assert all(len(c.i_a) == 5 for c in curves)

    def test_seeded_curves_repeat(self, exit_tool):
        """A fixed seed reproduces Monte-Carlo curves."""
        first = exit_tool.curves(
            [2], [0.2], ["gauss"], grid_points=3, n_samples=300, seed=5
        )
        second = exit_tool.curves(
            [2], [0.2], ["gauss"], grid_points=3, n_samples=300, seed=5
        )
        assert first[0].i_e == second[0].i_e

    def test_area_check_logged(self, exit_tool, caplog):
        """The closed-form curve triggers the area check."""
        with caplog.at_level(logging.DEBUG, logger="qsc_ldpc.tools.exit_tool"):
            exit_tool.curves([3], [0.25], ["bec"], grid_points=11)
        assert "Area check m=3" in caplog.text

    def test_rows_flatten(self, exit_tool):
        """One CSV row per grid point and curve."""
        curves = exit_tool.curves([2], [0.1, 0.2], ["bec"], grid_points=4)
        rows = ExitTool.rows(curves)
        assert len(rows) == 8
        assert set(rows[0]) == {"i_a", "i_e", "model", "m", "epsilon", "n_samples"}

    @pytest.mark.slow
    def test_workers_do_not_change_curves(self, exit_tool):
        """Process-parallel curves equal the serial ones for a fixed seed."""
        args = ([2, 3], [0.2], ["bec", "gauss"])
        kwargs = {"grid_points": 4, "n_samples": 300, "seed": 9}
        serial = exit_tool.curves(*args, **kwargs)
        parallel = exit_tool.curves(*args, workers=2, **kwargs)
        assert [c.i_e for c in parallel] == [c.i_e for c in serial]

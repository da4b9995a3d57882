"""Unit tests for the command-line interface."""

import csv
import json
from pathlib import Path
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from qsc_ldpc import __version__
from qsc_ldpc.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    cli,
    run,
    write_csv,
)
from qsc_ldpc.models.config import RunConfig
from qsc_ldpc.services.harness import CSV_COLUMNS


def _read_csv(path):
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def alist_file(temp_dir):
    """alist file of the N=8, m=2 PEG example."""
    path = temp_dir / "code.alist"
    code = run(
        [
            "construct",
            "--n-bits", "8",
            "--m", "2",
            "--d-v", "2",
            "--rho", "4:1",
            "--alist", str(path),
            "--out", str(temp_dir / "report.json"),
        ]
    )
    assert code == EXIT_OK
    return path


@pytest.mark.unit
@pytest.mark.cli
class TestAnalysisCommands:
    """capacity, layered, exit and design."""

    def test_capacity_reference_value(self, temp_dir):
        """capacity --m 4 --eps 0.25 reports about 2.2119986."""
        out = temp_dir / "cap.csv"
        assert run(["capacity", "--m", "4", "--eps", "0.25", "--out", str(out)]) == EXIT_OK
        rows = _read_csv(out)
        assert len(rows) == 1
        assert float(rows[0]["capacity_qsc"]) == pytest.approx(2.2119986, abs=1e-6)

    def test_capacity_to_stdout(self):
        """Without --out the CSV goes to stdout."""
        result = CliRunner().invoke(
            cli, ["capacity", "--m", "2", "--m", "3", "--eps", "0.1", "--log-level", "ERROR"]
        )
        assert result.exit_code == 0
        lines = [line for line in result.output.splitlines() if line.startswith(("m,", "2,", "3,"))]
        assert lines[0].startswith("m,epsilon,capacity_qsc")
        assert len(lines) == 3

    def test_capacity_from_config(self, temp_dir):
        """Grid values come from the config file when no flags are given."""
        config = temp_dir / "run.json"
        config.write_text(json.dumps({"version": 1, "capacity": {"m": [2, 5], "epsilon": [0.1]}}))
        out = temp_dir / "cap.csv"
        assert run(["capacity", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert [r["m"] for r in _read_csv(out)] == ["2", "5"]

    def test_bad_config_version(self, temp_dir):
        """Unknown config versions are validation errors."""
        config = temp_dir / "run.json"
        config.write_text(json.dumps({"version": 2}))
        assert run(["capacity", "--config", str(config)]) == EXIT_VALIDATION

    def test_layered(self, temp_dir):
        """One row per thick-layer split."""
        out = temp_dir / "layered.csv"
        assert run(["layered", "--m", "3", "--eps", "0.2", "--out", str(out)]) == EXIT_OK
        rows = _read_csv(out)
        assert [r["mu"] for r in rows] == ["0", "1", "2"]

    def test_exit_curve(self, temp_dir):
        """Closed-form curve on a five-point grid."""
        out = temp_dir / "exit.csv"
        args = ["exit", "--m", "2", "--eps", "0.1", "--model", "bec", "--grid-points", "5"]
        assert run([*args, "--out", str(out)]) == EXIT_OK
        rows = _read_csv(out)
        assert len(rows) == 5
        assert {r["model"] for r in rows} == {"bec"}

    def test_design_single_point(self, temp_dir):
        """One (m, eps) gives a JSON distribution."""
        out = temp_dir / "design.json"
        args = [
            "design", "--m", "1", "--eps", "0.05", "--prior-model", "bec",
            "--d-c-max", "20", "--out", str(out),
        ]
        assert run(args) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["lambda"] == {"3": 1.0}
        assert sum(payload["rho"].values()) == pytest.approx(1.0)
        assert 0.0 < payload["rate"] < 1.0
        assert payload["threshold"] is None

    def test_design_infeasible(self, temp_dir):
        """A point with zero capacity fails with the numerical exit code."""
        args = ["design", "--m", "1", "--eps", "0.5", "--prior-model", "bec"]
        assert run([*args, "--out", str(temp_dir / "d.json")]) == EXIT_NUMERICAL


@pytest.mark.unit
@pytest.mark.cli
class TestConstructCommand:
    """construct."""

    def test_report_and_alist(self, alist_file, temp_dir):
        """The report lists degrees and no violations."""
        report = json.loads((temp_dir / "report.json").read_text())
        assert report["n_bits"] == 8
        assert report["violations"] == []
        assert report["rate"] == pytest.approx(0.5)
        assert alist_file.read_text().startswith("8 4\n")

    def test_rho_from_design(self, temp_dir):
        """rho may come from a design JSON file."""
        design = temp_dir / "design.json"
        design.write_text(json.dumps({"lambda": {"2": 1.0}, "rho": {"4": 1.0}, "rate": 0.5}))
        out = temp_dir / "report.json"
        args = [
            "construct", "--n-bits", "8", "--m", "2", "--d-v", "2",
            "--from-design", str(design), "--out", str(out),
        ]
        assert run(args) == EXIT_OK
        assert json.loads(out.read_text())["check_degrees"] == {"4": 4}

    def test_malformed_rho(self):
        """rho needs degree:fraction pairs."""
        args = ["construct", "--n-bits", "8", "--m", "2", "--rho", "4-1"]
        assert run(args) == EXIT_USAGE

    def test_impossible_degree(self, temp_dir):
        """Checks wider than the number of symbols cannot be built."""
        args = [
            "construct", "--n-bits", "8", "--m", "2", "--d-v", "2", "--rho", "5:1",
            "--out", str(temp_dir / "r.json"),
        ]
        assert run(args) == EXIT_VALIDATION


@pytest.mark.unit
@pytest.mark.cli
class TestSimulateCommand:
    """simulate."""

    def test_sweep_csv(self, alist_file, temp_dir):
        """Columns follow the documented order."""
        out = temp_dir / "ber.csv"
        args = [
            "simulate", "--alist", str(alist_file), "--m", "2", "--eps", "0.0",
            "--eps", "0.1", "--max-codewords", "3", "--seed", "1", "--out", str(out),
        ]
        assert run(args) == EXIT_OK
        with out.open(newline="") as fh:
            header = next(csv.reader(fh))
        assert header == list(CSV_COLUMNS)
        rows = _read_csv(out)
        assert rows[0]["bit_errors"] == "0"
        assert len(rows) == 2

    def test_compare(self, alist_file, temp_dir):
        """--compare adds a decoder column."""
        out = temp_dir / "cmp.csv"
        args = [
            "simulate", "--alist", str(alist_file), "--m", "2", "--eps", "0.1",
            "--max-codewords", "2", "--seed", "1", "--compare", "--out", str(out),
        ]
        assert run(args) == EXIT_OK
        assert [r["decoder"] for r in _read_csv(out)] == ["front-end", "baseline"]

    def test_missing_code(self):
        """A simulation needs a code source."""
        assert run(["simulate", "--m", "2", "--eps", "0.1"]) == EXIT_VALIDATION

    def test_missing_alist(self, temp_dir):
        """A nonexistent alist path is a usage error."""
        args = ["simulate", "--alist", str(temp_dir / "nope.alist"), "--m", "2", "--eps", "0.1"]
        assert run(args) == EXIT_USAGE


@pytest.mark.unit
@pytest.mark.cli
class TestVerifyAndMisc:
    """verify, version and usage errors."""

    def test_verify_pass(self, temp_dir):
        """All suites valid gives exit code 0."""
        report = {"overall_valid": True, "suites": []}
        with patch("qsc_ldpc.cli.VerifierTool") as mock_tool:
            mock_tool.return_value.verify.return_value = report
            assert run(["verify", "--out", str(temp_dir / "v.json")]) == EXIT_OK
        assert json.loads((temp_dir / "v.json").read_text())["overall_valid"] is True

    def test_verify_failure(self, temp_dir):
        """A failing suite gives the numerical exit code."""
        report = {"overall_valid": False, "suites": [{"name": "x", "valid": False}]}
        with patch("qsc_ldpc.cli.VerifierTool") as mock_tool:
            mock_tool.return_value.verify.return_value = report
            assert run(["verify", "--out", str(temp_dir / "v.json")]) == EXIT_NUMERICAL

    def test_version(self):
        """--version prints the package version."""
        result = CliRunner().invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_unknown_option(self):
        """Unknown flags are usage errors."""
        assert run(["capacity", "--bogus"]) == EXIT_USAGE

    def test_out_of_range_value(self):
        """Values outside a flag's range are usage errors."""
        assert run(["capacity", "--eps", "1.5"]) == EXIT_USAGE


@pytest.mark.unit
@pytest.mark.cli
class TestWorkersAndOutput:
    """--workers handling and empty output."""

    def test_workers_ignored_by_capacity(self, temp_dir):
        """Serial commands warn that --workers does nothing."""
        out = temp_dir / "cap.csv"
        with patch("qsc_ldpc.cli.logger") as mock_logger:
            args = ["capacity", "--m", "2", "--eps", "0.1", "--workers", "2", "--out", str(out)]
            assert run(args) == EXIT_OK
        messages = [call.args[0] for call in mock_logger.warning.call_args_list]
        assert "--workers has no effect on the capacity command" in messages

    def test_single_worker_is_silent(self, temp_dir):
        """--workers 1 on a serial command logs no warning."""
        out = temp_dir / "cap.csv"
        with patch("qsc_ldpc.cli.logger") as mock_logger:
            args = ["capacity", "--m", "2", "--eps", "0.1", "--workers", "1", "--out", str(out)]
            assert run(args) == EXIT_OK
        mock_logger.warning.assert_not_called()

    def test_design_sweep_passes_workers(self, temp_dir):
        """A design sweep hands --workers to the tool."""
        out = temp_dir / "sweep.csv"
        with patch("qsc_ldpc.cli.DesignTool") as mock_tool:
            mock_tool.return_value.sweep.return_value = [{"m": 1, "epsilon": 0.1, "rate": 0.5}]
            args = [
                "design", "--m", "1", "--eps", "0.1", "--eps", "0.2",
                "--workers", "3", "--out", str(out),
            ]
            assert run(args) == EXIT_OK
        assert mock_tool.return_value.sweep.call_args.kwargs["workers"] == 3

    def test_design_sweep_workers_from_config(self, temp_dir):
        """Without the flag the config file's worker count applies."""
        config = temp_dir / "run.json"
        config.write_text(json.dumps({"version": 1, "workers": 2}))
        out = temp_dir / "sweep.csv"
        with patch("qsc_ldpc.cli.DesignTool") as mock_tool:
            mock_tool.return_value.sweep.return_value = [{"m": 1, "epsilon": 0.1, "rate": 0.5}]
            args = [
                "design", "--config", str(config), "--m", "1", "--eps", "0.1",
                "--eps", "0.2", "--out", str(out),
            ]
            assert run(args) == EXIT_OK
        assert mock_tool.return_value.sweep.call_args.kwargs["workers"] == 2

    def test_empty_rows_write_nothing(self, temp_dir):
        """No rows and no columns give an empty file rather than an error."""
        out = temp_dir / "empty.csv"
        write_csv([], out)
        assert out.read_text() == ""

    def test_empty_rows_with_columns_write_header(self, temp_dir):
        """Known columns still produce a header line."""
        out = temp_dir / "empty.csv"
        write_csv([], out, columns=["m", "epsilon"])
        assert out.read_text() == "m,epsilon\n"


@pytest.mark.unit
@pytest.mark.cli
class TestRunConfig:
    """Top-level JSON configuration."""

    def test_construct_key_fills_construction(self):
        """The JSON key ``construct`` maps onto the construction section."""
        run_config = RunConfig.model_validate(
            {
                "version": 1,
                "construct": {"n_bits": 8, "symbol_width": 2, "d_v": 2, "rho": {"4": 1.0}},
            }
        )
        assert run_config.construction is not None
        assert run_config.construction.n_bits == 8
        assert "construct" not in RunConfig.model_fields

    def test_field_name_also_accepted(self):
        """The section may also be given by its attribute name."""
        run_config = RunConfig.model_validate(
            {"construction": {"n_bits": 8, "symbol_width": 2, "d_v": 2, "rho": {"4": 1.0}}}
        )
        assert run_config.construction.d_v == 2

    def test_example_config_loads(self):
        """The shipped example configuration validates."""
        path = Path(__file__).resolve().parents[2] / "config" / "example-run.json"
        run_config = RunConfig.model_validate_json(path.read_text())
        assert run_config.construction.n_bits == 12000
        assert run_config.workers == 4

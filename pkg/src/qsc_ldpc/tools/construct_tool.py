"""PEG construction tool."""
import logging
from pathlib import Path

from qsc_ldpc.models.code import ConstructionSpec
from qsc_ldpc.models.results import ConstructionReport
from qsc_ldpc.services.code import ParityCheckCode, save_alist
from qsc_ldpc.services.construct import construction_report, peg_construct


class ConstructTool:
    """Tool for building symbol-constrained LDPC codes."""

    def __init__(self) -> None:
        """Initialize construct tool with logging."""
        self.logger = logging.getLogger(__name__)

    def construct(
        self, spec: ConstructionSpec, alist_path: Path | None = None
    ) -> tuple[ParityCheckCode, ConstructionReport]:
        """Build the code, optionally write it as alist, and report on it."""
        code = peg_construct(spec)
        report = construction_report(code, spec)
        if report.violations:
            self.logger.warning(
                f"{len(report.violations)} symbol-constraint violations in constructed code"
            )
        if alist_path is not None:
            alist_path.write_text(save_alist(code))
            self.logger.info(f"Wrote alist to {alist_path}")
        self.logger.info(
            f"Constructed N={report.n_bits}, M={report.n_checks}, girth={report.girth}"
        )
        return code, report

"""Exception hierarchy for qsc_ldpc."""
from __future__ import annotations

from typing import Any


class QscLdpcError(Exception):
    """Base class for all toolkit errors."""


class ParameterDomainError(QscLdpcError, ValueError):
    """A closed-form quantity was evaluated outside its domain."""


class AlistParseError(QscLdpcError):
    """Malformed alist text."""

    def __init__(self, message: str, line: int) -> None:
        """Record the 1-based line number of the offending alist line."""
        super().__init__(f"line {line}: {message}")
        self.line = line


class InconsistentDegreeError(QscLdpcError):
    """Column and row adjacency lists of an alist file disagree."""


class SymbolConstraintError(QscLdpcError):
    """A parity check contains two bits of the same symbol."""

    def __init__(self, violations: list[tuple[int, int]]) -> None:
        """Keep the (check, symbol) violation pairs for reporting."""
        preview = ", ".join(f"(check={c}, symbol={s})" for c, s in violations[:5])
        more = "" if len(violations) <= 5 else f" and {len(violations) - 5} more"
        super().__init__(f"symbol-separation violated: {preview}{more}")
        self.violations = violations


class ConstructionError(QscLdpcError):
    """PEG could not place an edge."""

    def __init__(self, message: str, bit: int) -> None:
        """Keep the index of the bit that could not be connected."""
        super().__init__(f"bit {bit}: {message}")
        self.bit = bit


class InfeasibleDesignError(QscLdpcError):
    """The check-degree LP has no feasible point."""

    def __init__(self, message: str, binding_points: list[float]) -> None:
        """Keep the a-priori grid points whose constraints cannot be met."""
        super().__init__(message)
        self.binding_points = binding_points


class NumericalError(QscLdpcError):
    """A computation produced non-finite or inconsistent numbers."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        """Attach optional diagnostic values."""
        super().__init__(message)
        self.details = details or {}

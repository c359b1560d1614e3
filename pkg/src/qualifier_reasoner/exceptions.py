"""Centralized exception hierarchy for the qualifier-reasoner package.

All domain-specific exceptions inherit from ``QualifierReasonerError`` so
callers can catch the entire family with a single ``except`` clause.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Sequence

    from qualifier_reasoner.rules.diagnostics import RuleDiagnostic


class QualifierReasonerError(Exception):
    """Base exception for all qualifier-reasoner errors."""


# ---------------------------------------------------------------------------
# Prefix and statement errors
# ---------------------------------------------------------------------------


class PrefixError(QualifierReasonerError):
    """Raised when a prefixed name uses an undeclared prefix."""


class StatementValidationError(QualifierReasonerError):
    """Raised when a statement violates a structural invariant on insert."""


# ---------------------------------------------------------------------------
# Sort algebra errors
# ---------------------------------------------------------------------------


class SortError(QualifierReasonerError):
    """Base exception for sort algebra operations."""


class SortDomainError(SortError):
    """Raised when a partial sort operation is applied outside its domain."""


class RegionLookupError(SortError):
    """Raised when a space operation meets a region the containment table lacks."""


class SortDecodeError(SortError):
    """Raised when a canonical JSON sort literal violates its schema."""


# ---------------------------------------------------------------------------
# Rule errors
# ---------------------------------------------------------------------------


class RuleError(QualifierReasonerError):
    """Base exception for rule loading and compilation."""


class RuleDiagnosticsError(RuleError):
    """Rule error carrying every diagnostic collected for the input."""

    def __init__(self, diagnostics: Sequence[RuleDiagnostic]) -> None:
        self.diagnostics = list(diagnostics)
        summary = "; ".join(str(diag) for diag in self.diagnostics)
        super().__init__(summary or "rule error")


class RuleSyntaxError(RuleDiagnosticsError):
    """Raised when rule text does not match the rule grammar."""


class RuleValidationError(RuleDiagnosticsError):
    """Raised when a parsed rule fails range restriction or sort checks."""


class RuleLookupError(RuleError):
    """Raised when a built-in rule name is unknown."""


class CompileError(RuleError):
    """Raised when a rule uses a construct the SPARQL compiler cannot emit."""


# ---------------------------------------------------------------------------
# Evaluation errors
# ---------------------------------------------------------------------------


class EvaluationError(QualifierReasonerError):
    """Raised when a term cannot be evaluated under a binding."""


# ---------------------------------------------------------------------------
# Ingestion errors
# ---------------------------------------------------------------------------


class IngestionError(QualifierReasonerError):
    """Raised when an input file cannot be read or parsed."""

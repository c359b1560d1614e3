"""Machine-readable diagnostics produced while loading rules."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum


class DiagnosticCode(StrEnum):
    SYNTAX_ERROR = "syntax-error"
    UNKNOWN_FUNCTION = "unknown-function"
    ARITY_MISMATCH = "arity-mismatch"
    UNBOUND_HEAD_VARIABLE = "unbound-head-variable"
    UNBOUND_BUILTIN_VARIABLE = "unbound-builtin-variable"
    SORT_MISMATCH = "sort-mismatch"
    FUNCTION_AS_PREDICATE = "function-as-predicate"
    PREDICATE_AS_FUNCTION = "predicate-as-function"
    NON_HORN_RULE = "non-horn-rule"
    UNKNOWN_PREFIX = "unknown-prefix"
    BAD_LITERAL = "bad-literal"

    @property
    def is_syntactic(self) -> bool:
        """Codes raised as :class:`RuleSyntaxError` rather than validation errors."""
        return self in _SYNTACTIC


_SYNTACTIC = frozenset(
    {
        DiagnosticCode.SYNTAX_ERROR,
        DiagnosticCode.NON_HORN_RULE,
        DiagnosticCode.UNKNOWN_PREFIX,
        DiagnosticCode.BAD_LITERAL,
    }
)


@dataclass(frozen=True, slots=True)
class RuleDiagnostic:
    code: DiagnosticCode
    message: str
    rule: str | None = None
    line: int | None = None
    column: int | None = None

    @property
    def location(self) -> str:
        if self.line is None:
            return ""
        return f"{self.line}:{self.column or 0}"

    def __str__(self) -> str:
        where = ":".join(part for part in (self.rule, self.location) if part)
        prefix = f"{where}: " if where else ""
        return f"{prefix}[{self.code.value}] {self.message}"

    def as_dict(self) -> dict[str, str | int | None]:
        return {
            "code": self.code.value,
            "message": self.message,
            "rule": self.rule,
            "line": self.line,
            "column": self.column,
        }

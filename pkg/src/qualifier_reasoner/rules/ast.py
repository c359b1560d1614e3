"""Abstract syntax of rules.

Source positions are carried for diagnostics but excluded from equality,
so a rule re-parsed from its printed form compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, TypeAlias

from qualifier_reasoner.knowledge.models import PATTERN_SLOTS, StatementKind

if TYPE_CHECKING:
    from collections.abc import Iterator

    from qualifier_reasoner.values import DataValue, Iri


@dataclass(frozen=True, slots=True)
class Position:
    line: int
    column: int


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    pos: Position | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class IriConst:
    iri: Iri
    pos: Position | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Literal:
    """A data literal; plain integers are natural numbers."""

    value: DataValue | int
    pos: Position | None = field(default=None, compare=False)


@dataclass(frozen=True, slots=True)
class Apply:
    """Function application; zero arguments denotes a named constant."""

    fn: str
    args: tuple[Term, ...] = ()
    pos: Position | None = field(default=None, compare=False)

    @property
    def arity(self) -> int:
        return len(self.args)


Term: TypeAlias = Var | IriConst | Literal | Apply


def term_variables(term: Term) -> Iterator[str]:
    """Variable names of ``term`` in left-to-right order (with repeats)."""
    if isinstance(term, Var):
        yield term.name
    elif isinstance(term, Apply):
        for arg in term.args:
            yield from term_variables(arg)


def is_ground(term: Term) -> bool:
    return next(term_variables(term), None) is None


# ---------------------------------------------------------------------------
# Atoms and rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StatementAtom:
    """``st``/``sno``/``ssome`` atom; ``sno`` and ``ssome`` have no value term."""

    kind: StatementKind
    terms: tuple[Term, ...]
    pos: Position | None = field(default=None, compare=False)

    @property
    def expected_arity(self) -> int:
        return len(PATTERN_SLOTS) if self.kind.has_value else len(PATTERN_SLOTS) - 1

    def slots(self) -> list[tuple[str, Term]]:
        """Pair each term with its slot name (subject, prop, value, sorts)."""
        names = [name for name in PATTERN_SLOTS if self.kind.has_value or name != "value"]
        return list(zip(names, self.terms, strict=False))

    def variables(self) -> Iterator[str]:
        for term in self.terms:
            yield from term_variables(term)


@dataclass(frozen=True, slots=True)
class BuiltinAtom:
    name: str
    args: tuple[Term, ...]
    pos: Position | None = field(default=None, compare=False)

    def variables(self) -> Iterator[str]:
        for term in self.args:
            yield from term_variables(term)


Atom: TypeAlias = StatementAtom | BuiltinAtom


@dataclass(frozen=True, slots=True)
class Rule:
    name: str
    body: tuple[Atom, ...]
    head: StatementAtom
    pos: Position | None = field(default=None, compare=False)
    source: str | None = field(default=None, compare=False)

    @property
    def statement_atoms(self) -> list[StatementAtom]:
        return [atom for atom in self.body if isinstance(atom, StatementAtom)]

    @property
    def builtin_atoms(self) -> list[BuiltinAtom]:
        return [atom for atom in self.body if isinstance(atom, BuiltinAtom)]

"""Deduplicated in-memory statement graph with pattern queries."""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.exceptions import PrefixError, StatementValidationError
from qualifier_reasoner.knowledge.models import (
    Binding,
    Statement,
    StatementPattern,
    match,
)
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.values import Iri

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)


class KnowledgeGraph:
    """Insertion-ordered set of statements.

    Statements are indexed by property and by (subject, property) so rule
    bodies with constant properties do not scan the whole graph. The graph
    is only mutated between rule rounds; concurrent readers are safe while
    nothing inserts.
    """

    def __init__(
        self,
        statements: Iterable[Statement] = (),
        prefixes: PrefixTable = DEFAULT_PREFIXES,
    ) -> None:
        self.prefixes = prefixes
        self._statements: dict[Statement, Statement] = {}
        self._by_prop: dict[Iri, list[Statement]] = {}
        self._by_subject_prop: dict[tuple[Iri, Iri], list[Statement]] = {}
        for statement in statements:
            self.insert(statement)

    def _check_prefixes(self, statement: Statement) -> None:
        iris = [statement.subject, statement.prop]
        if isinstance(statement.value, Iri):
            iris.append(statement.value)
        try:
            for iri in iris:
                self.prefixes.check(iri)
        except PrefixError as exc:
            msg = f"prefixed IRIs must use a declared prefix: {exc}"
            raise StatementValidationError(msg) from exc

    def insert(self, statement: Statement) -> bool:
        """Add ``statement``; return ``False`` if an equal one is present.

        Raises:
            StatementValidationError: If the statement is malformed or uses
                an undeclared prefix.
        """
        if not isinstance(statement, Statement):
            msg = f"expected a Statement, got {type(statement).__name__}"
            raise StatementValidationError(msg)
        if statement in self._statements:
            return False
        self._check_prefixes(statement)
        self._statements[statement] = statement
        self._by_prop.setdefault(statement.prop, []).append(statement)
        self._by_subject_prop.setdefault((statement.subject, statement.prop), []).append(
            statement
        )
        return True

    def extend(self, statements: Iterable[Statement]) -> int:
        """Insert many statements; return how many were new."""
        return sum(1 for statement in statements if self.insert(statement))

    def __contains__(self, statement: object) -> bool:
        return statement in self._statements

    def __len__(self) -> int:
        return len(self._statements)

    def __iter__(self) -> Iterator[Statement]:
        return iter(self._statements.values())

    def get(self, statement: Statement) -> Statement | None:
        """The stored statement equal to ``statement`` (keeps its origin)."""
        return self._statements.get(statement)

    def copy(self) -> KnowledgeGraph:
        return KnowledgeGraph(self, self.prefixes)

    def _candidates(self, pattern: StatementPattern, binding: Binding) -> Iterable[Statement]:
        subject = pattern.constant("subject", binding)
        prop = pattern.constant("prop", binding)
        if isinstance(prop, Iri):
            if isinstance(subject, Iri):
                return self._by_subject_prop.get((subject, prop), ())
            return self._by_prop.get(prop, ())
        return self._statements.values()

    def query(
        self,
        pattern: StatementPattern,
        binding: Binding | None = None,
    ) -> Iterator[tuple[Statement, Binding]]:
        """Yield every statement unifying with ``pattern`` and its binding.

        Results come in insertion order.
        """
        base: Binding = {} if binding is None else binding
        for statement in self._candidates(pattern, base):
            extended = match(pattern, statement, base)
            if extended is not None:
                yield statement, extended

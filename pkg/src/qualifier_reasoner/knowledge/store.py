"""NDJSON persistence for knowledge graphs.

One statement per line, keys ``kind, s, p, v, validity, causality,
sequence, annotations, provenance, origin``; sort objects use the canonical
sort encoding. Lines are written sorted so the file is byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from typing import TYPE_CHECKING, Any

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from qualifier_reasoner.exceptions import (
    IngestionError,
    SortDecodeError,
    StatementValidationError,
)
from qualifier_reasoner.knowledge.graph import KnowledgeGraph
from qualifier_reasoner.knowledge.models import ASSERTED, Statement, StatementKind
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.sorts.categories import SortCategory
from qualifier_reasoner.sorts.codec import encode_sort, sort_from_json
from qualifier_reasoner.values import Iri, value_from_json, value_to_json

if TYPE_CHECKING:
    from pathlib import Path

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)


class StatementRecord(BaseModel):
    """Wire form of one statement line."""

    model_config = ConfigDict(extra="forbid")

    kind: StatementKind
    s: str = Field(min_length=1)
    p: str = Field(min_length=1)
    v: Any = None
    validity: dict[str, Any] = Field(default_factory=dict)
    causality: dict[str, Any] = Field(default_factory=dict)
    sequence: dict[str, Any] = Field(default_factory=dict)
    annotations: dict[str, Any] = Field(default_factory=dict)
    provenance: dict[str, Any] = Field(default_factory=dict)
    origin: str = Field(default=ASSERTED, pattern=r"^(asserted|inferred:.+)$")

    @classmethod
    def from_statement(cls, statement: Statement) -> StatementRecord:
        return cls(
            kind=statement.kind,
            s=statement.subject.text,
            p=statement.prop.text,
            v=None if statement.value is None else value_to_json(statement.value),
            # round-trip through the canonical text so nested keys are sorted
            validity=json.loads(encode_sort(statement.validity)),
            causality=json.loads(encode_sort(statement.causality)),
            sequence=json.loads(encode_sort(statement.sequence)),
            annotations=json.loads(encode_sort(statement.annotations)),
            provenance=json.loads(encode_sort(statement.provenance)),
            origin=statement.origin,
        )

    def to_statement(self) -> Statement:
        """Rebuild the statement.

        Raises:
            SortDecodeError: If a sort object violates its schema.
            StatementValidationError: If the statement is malformed.
            ValueError: If the value encoding is not recognised.
        """
        return Statement(
            self.kind,
            Iri(self.s),
            Iri(self.p),
            None if self.v is None else value_from_json(self.v),
            sort_from_json(SortCategory.VALIDITY, self.validity),  # type: ignore[arg-type]
            sort_from_json(SortCategory.CAUSALITY, self.causality),  # type: ignore[arg-type]
            sort_from_json(SortCategory.SEQUENCE, self.sequence),  # type: ignore[arg-type]
            sort_from_json(SortCategory.ANNOTATION, self.annotations),  # type: ignore[arg-type]
            sort_from_json(SortCategory.PROVENANCE, self.provenance),  # type: ignore[arg-type]
            origin=self.origin,
        )

    def line(self, *, with_origin: bool = True) -> str:
        exclude = None if with_origin else {"origin"}
        return self.model_dump_json(exclude=exclude, exclude_none=True)


def statement_line(statement: Statement) -> str:
    return StatementRecord.from_statement(statement).line()


def statement_key(statement: Statement) -> str:
    """Stable 16-hex-digit key of a statement (origin excluded)."""
    canonical = StatementRecord.from_statement(statement).line(with_origin=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def dumps_graph(graph: KnowledgeGraph) -> str:
    lines = sorted(statement_line(statement) for statement in graph)
    return "".join(f"{line}\n" for line in lines)


def save_graph(graph: KnowledgeGraph, path: Path) -> None:
    """Write ``graph`` as sorted NDJSON.

    Raises:
        IngestionError: If the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_graph(graph), encoding="utf-8")
    except OSError as exc:
        msg = f"cannot write {path}: {exc}"
        raise IngestionError(msg) from exc
    logger.info("graph_saved", path=str(path), statements=len(graph))


def loads_graph(
    text: str,
    prefixes: PrefixTable = DEFAULT_PREFIXES,
    source: str = "<string>",
) -> KnowledgeGraph:
    """Parse NDJSON text; blank lines are ignored.

    Raises:
        IngestionError: On the first invalid line, naming its number.
    """
    graph = KnowledgeGraph(prefixes=prefixes)
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = StatementRecord.model_validate_json(line)
            statement = record.to_statement()
        except (
            ValidationError,
            SortDecodeError,
            StatementValidationError,
            ValueError,
        ) as exc:
            msg = f"{source}:{line_no}: {exc}"
            raise IngestionError(msg) from exc
        try:
            graph.insert(statement)
        except StatementValidationError as exc:
            msg = f"{source}:{line_no}: {exc}"
            raise IngestionError(msg) from exc
    return graph


def load_graph(path: Path, prefixes: PrefixTable = DEFAULT_PREFIXES) -> KnowledgeGraph:
    """Read a graph written by :func:`save_graph`.

    Raises:
        IngestionError: If the file is unreadable or a line is invalid.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc}"
        raise IngestionError(msg) from exc
    graph = loads_graph(text, prefixes, source=str(path))
    logger.info("graph_loaded", path=str(path), statements=len(graph))
    return graph

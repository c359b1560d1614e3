"""Write a graph as Wikidata-style statement nodes with sort literals.

Each statement becomes::

    wd:Q182450 p:P26 wds:Q182450-<key> .
    wds:Q182450-<key> ps:P26 wd:Q253916 ;
        pq:validityJ '{...}' ;
        pq:causalityJ '{...}' ;
        pq:sequenceJ '{}' ;
        pq:annotationsJ '{}' ;
        pq:provenanceJ '{}' .

Statements are ordered by subject IRI then statement key, so the output
is byte-stable for a given graph.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.exceptions import IngestionError
from qualifier_reasoner.knowledge.models import SORT_SLOTS, Statement, StatementKind
from qualifier_reasoner.knowledge.store import statement_key
from qualifier_reasoner.knowledge.turtle import SPECIAL_DATATYPE
from qualifier_reasoner.prefixes import WIKIDATA_ENTITY, PrefixTable
from qualifier_reasoner.sorts.codec import encode_sort
from qualifier_reasoner.values import XSD_STRING, DataValue, Iri, SpecialValue, Value

if TYPE_CHECKING:
    from pathlib import Path

    from qualifier_reasoner.knowledge.graph import KnowledgeGraph

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

SORT_PREDICATES = tuple(
    f"pq:{name}J" for name in ("validity", "causality", "sequence", "annotations", "provenance")
)
_NODE_LOCAL = re.compile(r"^[A-Za-z0-9_]+$")
_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def quote_double(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


def quote_single(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace("'", "\\'")
    escaped = escaped.replace("\n", "\\n").replace("\r", "\\r")
    return f"'{escaped}'"


def turtle_term(value: Value) -> str:
    if isinstance(value, Iri):
        return value.text
    if isinstance(value, SpecialValue):
        return f"{quote_double(value.value)}^^{SPECIAL_DATATYPE}"
    if isinstance(value, DataValue):
        quoted = quote_double(value.lexical)
        if value.language is not None:
            return f"{quoted}@{value.language}"
        if value.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^{value.datatype}"
    msg = f"cannot render {value!r}"
    raise TypeError(msg)


def property_local(prop: Iri, prefixes: PrefixTable) -> str | None:
    """``Pn`` for a Wikidata property IRI, ``None`` for anything else."""
    full = prefixes.expand(prop.text)
    if not full.startswith(WIKIDATA_ENTITY):
        return None
    local = full[len(WIKIDATA_ENTITY) :]
    return local if re.fullmatch(r"P\d+", local) else None


def _block(statement: Statement, local: str) -> str:
    key = statement_key(statement)
    subject_local = statement.subject.local
    node_name = f"{subject_local}-{key}" if _NODE_LOCAL.match(subject_local) else key
    node = f"wds:{node_name}"

    if statement.kind is StatementKind.SNO:
        main = f"a wdno:{local}"
    elif statement.kind is StatementKind.SSOME:
        main = f"ps:{local} []"
    else:
        assert statement.value is not None
        main = f"ps:{local} {turtle_term(statement.value)}"

    lines = [f"{statement.subject.text} p:{local} {node} .", f"{node} {main} ;"]
    sort_values = [getattr(statement, slot) for slot in SORT_SLOTS]
    for index, (predicate, value) in enumerate(zip(SORT_PREDICATES, sort_values, strict=True)):
        end = " ." if index == len(SORT_PREDICATES) - 1 else " ;"
        lines.append(f"    {predicate} {quote_single(encode_sort(value))}{end}")
    return "\n".join(lines) + "\n"


def dumps_sort_triples(graph: KnowledgeGraph) -> str:
    """Render the prefix header and one block per statement."""
    prefixes = graph.prefixes
    header = "".join(f"@prefix {name}: <{base}> .\n" for name, base in prefixes.declarations())
    blocks: list[tuple[str, str, str]] = []
    for statement in graph:
        local = property_local(statement.prop, prefixes)
        if local is None:
            logger.warning(
                "statement_not_emitted",
                property=statement.prop.text,
                reason="property is not a Wikidata property",
            )
            continue
        blocks.append((statement.subject.text, statement_key(statement), _block(statement, local)))
    blocks.sort(key=lambda item: (item[0], item[1]))
    return header + "".join("\n" + block for _, _, block in blocks)


def emit_sort_triples(graph: KnowledgeGraph, path: Path) -> None:
    """Write :func:`dumps_sort_triples` output to ``path``.

    Raises:
        IngestionError: If the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_sort_triples(graph), encoding="utf-8")
    except OSError as exc:
        msg = f"cannot write {path}: {exc}"
        raise IngestionError(msg) from exc
    logger.info("sort_triples_written", path=str(path), statements=len(graph))

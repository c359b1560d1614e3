"""Ingestion of Wikidata-style statement nodes from Turtle.

Only the statement pattern of a Wikidata dump is read::

    wd:Q182450 p:P26 wds:Q182450-3A25317F .
    wds:Q182450-3A25317F ps:P26 wd:Q253916 ;
        pq:P580 "1960-01-01T00:00:00Z"^^xsd:dateTime ;
        pq:P1534 wd:Q93190 ;
        prov:wasDerivedFrom wdref:abc .

Every other triple is skipped and counted. Previously emitted sort literals
(``pq:validityJ`` ... ``pq:provenanceJ``) are decoded instead of rebuilt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import structlog
from rdflib import BNode, Graph, Literal, URIRef
from rdflib.exceptions import ParserError
from rdflib.namespace import RDF
from rdflib.plugins.parsers.notation3 import BadSyntax

from qualifier_reasoner.exceptions import (
    IngestionError,
    SortDecodeError,
    StatementValidationError,
)
from qualifier_reasoner.knowledge.graph import KnowledgeGraph
from qualifier_reasoner.knowledge.models import Statement, StatementKind
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, WIKIDATA_ENTITY, PrefixTable
from qualifier_reasoner.sorts.builder import build_sorts
from qualifier_reasoner.sorts.categories import DEFAULT_CATEGORY_MAP, CategoryMap, SortCategory
from qualifier_reasoner.sorts.codec import decode_sort
from qualifier_reasoner.values import (
    XSD_DATETIME,
    XSD_STRING,
    DataValue,
    Iri,
    QualifierBag,
    SpecialValue,
    Value,
    datetime_value,
    parse_datetime,
)

if TYPE_CHECKING:
    from pathlib import Path

    from rdflib.term import Node

    from qualifier_reasoner.sorts.codec import SortValue
    from qualifier_reasoner.sorts.validity import ContainmentTable

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

PROP_NS = "http://www.wikidata.org/prop/"
STATEMENT_NS = PROP_NS + "statement/"
QUALIFIER_NS = PROP_NS + "qualifier/"
NOVALUE_NS = PROP_NS + "novalue/"
WIKIBASE_NS = "http://wikiba.se/ontology#"
PROV_DERIVED_FROM = "http://www.w3.org/ns/prov#wasDerivedFrom"

# Datatype used when a special marker is the main value of a statement.
SPECIAL_DATATYPE = "qr:special"

SORT_LITERALS: dict[str, SortCategory] = {
    "validityJ": SortCategory.VALIDITY,
    "causalityJ": SortCategory.CAUSALITY,
    "sequenceJ": SortCategory.SEQUENCE,
    "annotationsJ": SortCategory.ANNOTATION,
    "provenanceJ": SortCategory.PROVENANCE,
}

_PROPERTY_LOCAL = re.compile(r"^P\d+$")
_PREFIX_DECL = re.compile(
    r"^\s*(?:@prefix|PREFIX)\s+([A-Za-z][\w.-]*)?:\s*<([^>]*)>",
    re.IGNORECASE | re.MULTILINE,
)
_IGNORED_PREDICATES = frozenset({WIKIBASE_NS + "rank"})


@dataclass(slots=True)
class IngestReport:
    """Counts and per-item diagnostics of one ingestion.

    ``statements_parsed == statements_added + statements_skipped`` and
    ``pairs_seen == pairs_routed`` hold for every run.
    """

    statements_parsed: int = 0
    statements_added: int = 0
    statements_skipped: int = 0
    pairs_seen: int = 0
    pairs_routed: int = 0
    triples_skipped: int = 0
    diagnostics: list[str] = field(default_factory=list)


def declared_prefixes(text: str) -> dict[str, str]:
    """Prefix declarations found in Turtle ``text`` (``@prefix`` or ``PREFIX``)."""
    return {match.group(1) or "": match.group(2) for match in _PREFIX_DECL.finditer(text)}


def _triple_key(triple: tuple[Node, Node, Node]) -> tuple[str, str, str]:
    subject, predicate, obj = triple
    return (str(subject), str(predicate), str(obj))


def _local(iri: str, namespace: str) -> str | None:
    if iri.startswith(namespace):
        return iri[len(namespace) :]
    return None


class _TurtleReader:
    def __init__(
        self,
        prefixes: PrefixTable,
        category_map: CategoryMap,
        containment: ContainmentTable | None,
    ) -> None:
        self.prefixes = prefixes
        self.category_map = category_map
        self.containment = containment
        self.report = IngestReport()
        self.graph = KnowledgeGraph(prefixes=prefixes)

    # -- terms --------------------------------------------------------------

    def iri(self, node: Node) -> Iri:
        return self.prefixes.iri_from_full(str(node))

    def property_iri(self, local: str) -> Iri:
        return self.prefixes.iri_from_full(WIKIDATA_ENTITY + local)

    def data_value(self, literal: Literal) -> Value:
        datatype = (
            self.prefixes.compact(str(literal.datatype)) if literal.datatype else XSD_STRING
        )
        lexical = str(literal)
        if datatype == SPECIAL_DATATYPE:
            try:
                return SpecialValue(lexical)
            except ValueError:
                pass
        if datatype == XSD_DATETIME:
            try:
                return datetime_value(parse_datetime(lexical))
            except ValueError:
                pass
        return DataValue(lexical, datatype, literal.language)

    def value(self, node: Node) -> Value:
        if isinstance(node, BNode):
            return SpecialValue.SOME_VALUE
        if isinstance(node, Literal):
            return self.data_value(node)
        return self.iri(node)

    # -- diagnostics --------------------------------------------------------

    def skip_triple(self, node: Node, predicate: Node, reason: str) -> None:
        self.report.triples_skipped += 1
        self.report.diagnostics.append(f"{self.iri(node)} {self.iri(predicate)}: {reason}")

    def skip_statement(self, node: Node, reason: str) -> None:
        self.report.statements_skipped += 1
        self.report.diagnostics.append(f"{self.iri(node)}: {reason}")
        logger.debug("statement_skipped", node=str(node), reason=reason)

    # -- statement nodes ----------------------------------------------------

    def read(self, rdf_graph: Graph) -> None:
        edges: dict[Node, list[tuple[Node, str]]] = {}
        rest: list[tuple[Node, Node, Node]] = []
        for subject, predicate, obj in sorted(rdf_graph, key=_triple_key):
            local = _local(str(predicate), PROP_NS)
            if (
                local is not None
                and _PROPERTY_LOCAL.match(local)
                and isinstance(subject, URIRef)
                and not isinstance(obj, Literal)
            ):
                edges.setdefault(obj, []).append((subject, local))
            else:
                rest.append((subject, predicate, obj))

        node_triples: dict[Node, list[tuple[Node, Node]]] = {node: [] for node in edges}
        for subject, predicate, obj in rest:
            if subject in node_triples:
                node_triples[subject].append((predicate, obj))
            else:
                self.skip_triple(subject, predicate, "outside the statement pattern")

        for node, owners in edges.items():
            self.report.statements_parsed += 1
            if len(owners) != 1:
                self.skip_statement(node, f"reached by {len(owners)} p: edges")
                continue
            owner, local = owners[0]
            self.statement(node, owner, local, node_triples[node])

    def statement(
        self,
        node: Node,
        owner: Node,
        local: str,
        triples: list[tuple[Node, Node]],
    ) -> None:
        main_values: list[Node] = []
        no_value = False
        bag = QualifierBag()
        decoded: dict[SortCategory, SortValue] = {}

        for predicate, obj in triples:
            pred = str(predicate)
            if pred == STATEMENT_NS + local:
                main_values.append(obj)
                continue
            if pred in _IGNORED_PREDICATES:
                continue
            if pred == str(RDF.type):
                novalue_local = _local(str(obj), NOVALUE_NS)
                if novalue_local == local:
                    no_value = True
                elif novalue_local is not None and _PROPERTY_LOCAL.match(novalue_local):
                    bag = bag.add(self.property_iri(novalue_local), SpecialValue.NO_VALUE)
                elif str(obj) != WIKIBASE_NS + "Statement":
                    self.skip_triple(node, predicate, f"unsupported type {obj}")
                continue
            if pred == PROV_DERIVED_FROM:
                bag = bag.add(self.iri(predicate), self.value(obj))
                continue
            qualifier = _local(pred, QUALIFIER_NS)
            if qualifier in SORT_LITERALS and isinstance(obj, Literal):
                try:
                    decoded[SORT_LITERALS[qualifier]] = decode_sort(
                        SORT_LITERALS[qualifier], str(obj)
                    )
                except SortDecodeError as exc:
                    self.skip_triple(node, predicate, str(exc))
                continue
            if qualifier is not None and _PROPERTY_LOCAL.match(qualifier):
                bag = bag.add(self.property_iri(qualifier), self.value(obj))
                continue
            if _local(pred, STATEMENT_NS) is not None:
                self.skip_triple(node, predicate, f"does not match the p:{local} edge")
                continue
            self.skip_triple(node, predicate, "outside the statement pattern")

        if no_value and main_values:
            self.skip_statement(node, "has both a value and a no-value marker")
            return
        if not no_value and len(main_values) != 1:
            self.skip_statement(node, f"expected one ps:{local} value, found {len(main_values)}")
            return

        value: Value | None = None
        if no_value:
            kind = StatementKind.SNO
        elif isinstance(main_values[0], BNode):
            kind = StatementKind.SSOME
        else:
            kind = StatementKind.ST
            value = self.value(main_values[0])

        built = build_sorts(bag, self.category_map, self.containment)
        self.report.pairs_seen += len(bag)
        self.report.pairs_routed += sum(built.routed.values())
        self.report.diagnostics.extend(f"{self.iri(node)}: {diag}" for diag in built.diagnostics)

        sorts: dict[SortCategory, SortValue] = {
            SortCategory.VALIDITY: built.validity,
            SortCategory.CAUSALITY: built.causality,
            SortCategory.SEQUENCE: built.sequence,
            SortCategory.ANNOTATION: built.annotations,
            SortCategory.PROVENANCE: built.provenance,
        }
        sorts.update(decoded)

        try:
            statement = Statement(
                kind,
                self.iri(owner),
                self.property_iri(local),
                value,
                sorts[SortCategory.VALIDITY],  # type: ignore[arg-type]
                sorts[SortCategory.CAUSALITY],  # type: ignore[arg-type]
                sorts[SortCategory.SEQUENCE],  # type: ignore[arg-type]
                sorts[SortCategory.ANNOTATION],  # type: ignore[arg-type]
                sorts[SortCategory.PROVENANCE],  # type: ignore[arg-type]
            )
            added = self.graph.insert(statement)
        except StatementValidationError as exc:
            self.skip_statement(node, str(exc))
            return
        if added:
            self.report.statements_added += 1
        else:
            self.skip_statement(node, "duplicate of an earlier statement")


def ingest_turtle_text(
    text: str,
    prefixes: PrefixTable = DEFAULT_PREFIXES,
    category_map: CategoryMap = DEFAULT_CATEGORY_MAP,
    containment: ContainmentTable | None = None,
    source: str = "<string>",
) -> tuple[KnowledgeGraph, IngestReport]:
    """Parse Turtle text into a graph.

    Built-in prefixes are available without declaration; declarations in
    the text override them.

    Raises:
        IngestionError: If the text is not Turtle or uses an unknown prefix.
    """
    table = prefixes.with_prefixes(declared_prefixes(text))
    header = "".join(f"@prefix {name}: <{prefixes.base(name)}> .\n" for name in prefixes)
    rdf_graph = Graph()
    try:
        rdf_graph.parse(data=header + text, format="turtle")
    except (BadSyntax, ParserError, ValueError) as exc:
        msg = f"{source}: {exc}"
        raise IngestionError(msg) from exc

    reader = _TurtleReader(table, category_map, containment)
    reader.read(rdf_graph)
    report = reader.report
    logger.info(
        "turtle_ingested",
        source=source,
        parsed=report.statements_parsed,
        added=report.statements_added,
        skipped=report.statements_skipped,
        triples_skipped=report.triples_skipped,
    )
    return reader.graph, report


def ingest_turtle(
    path: Path,
    prefixes: PrefixTable = DEFAULT_PREFIXES,
    category_map: CategoryMap = DEFAULT_CATEGORY_MAP,
    containment: ContainmentTable | None = None,
) -> tuple[KnowledgeGraph, IngestReport]:
    """Read a Turtle file; see :func:`ingest_turtle_text`."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc}"
        raise IngestionError(msg) from exc
    return ingest_turtle_text(text, prefixes, category_map, containment, source=str(path))

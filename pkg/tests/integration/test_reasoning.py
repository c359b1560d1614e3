"""Integration tests: built-in rules saturating small qualified graphs."""

from __future__ import annotations

import random
from datetime import timedelta
from itertools import pairwise
from typing import TYPE_CHECKING, TypeAlias

import pytest

from qualifier_reasoner.config import EngineSettings
from qualifier_reasoner.engine import apply_rule, fixpoint
from qualifier_reasoner.knowledge.graph import KnowledgeGraph
from qualifier_reasoner.knowledge.models import Statement, StatementKind
from qualifier_reasoner.knowledge.store import dumps_graph
from qualifier_reasoner.rules.corpus import load_builtin_rules
from qualifier_reasoner.sorts.causality import Causality
from qualifier_reasoner.sorts.sequence import SequenceNode, seq_with_next, seq_with_prev
from qualifier_reasoner.values import XSD_DATETIME, DataValue, Iri
from tests.conftest import during, st, utc

if TYPE_CHECKING:
    from datetime import datetime

pytestmark = pytest.mark.integration

SPOUSE_SYMMETRIC = st("wd:P26", "wd:P2302", "wd:Q21510862")


def ended(*causes: str) -> Causality:
    return Causality(end_cause=frozenset(Iri(cause) for cause in causes))


def president(
    holder: str, start: datetime | None, end: datetime | None, sequence: SequenceNode
) -> Statement:
    """Position held: President of the United States."""
    return st(
        holder, "wd:P39", "wd:Q11696", validity=during(start, end), sequence=sequence
    )


class TestSampleGraph:
    """The five sample statements under the whole built-in corpus."""

    def test_inferred_statements(self, sample_graph: KnowledgeGraph) -> None:
        result, report = fixpoint(sample_graph, load_builtin_rules())
        expected = [
            st(
                "wd:Q253916",
                "wd:P26",
                "wd:Q182450",
                validity=during(utc(1960), utc(1965)),
                causality=ended("wd:Q93190"),
            ),
            president("wd:Q207", None, utc(2009, 1, 20), seq_with_next(Iri("wd:Q76"))),
            president("wd:Q22686", utc(2017, 1, 20), None, seq_with_prev(Iri("wd:Q76"))),
            president("wd:Q76", utc(2009, 1, 20), None, seq_with_prev(Iri("wd:Q207"))),
            president("wd:Q76", None, utc(2017, 1, 20), seq_with_next(Iri("wd:Q22686"))),
        ]
        for statement in expected:
            assert statement in result, statement
        assert len(result) == len(sample_graph) + len(expected)
        assert not report.limit_hit

    def test_origins_name_rules(self, sample_graph: KnowledgeGraph) -> None:
        result, _ = fixpoint(sample_graph, load_builtin_rules())
        origins = {statement.origin for statement in result}
        assert origins == {
            "asserted",
            "inferred:symmetry",
            "inferred:sequence_previous",
            "inferred:sequence_next",
        }

    def test_saturated_graph_is_closed(self, sample_graph: KnowledgeGraph) -> None:
        rules = load_builtin_rules()
        result, _ = fixpoint(sample_graph, rules)
        for rule in rules:
            assert apply_rule(result, rule).statements == [], rule.name

    def test_input_order_irrelevant(self, sample_graph: KnowledgeGraph) -> None:
        rules = load_builtin_rules()
        forward, _ = fixpoint(sample_graph, rules)
        backward, _ = fixpoint(KnowledgeGraph(reversed(list(sample_graph))), rules)
        assert dumps_graph(forward) == dumps_graph(backward)

    def test_parallel_rounds_match_serial(self, sample_graph: KnowledgeGraph) -> None:
        rules = load_builtin_rules()
        serial, _ = fixpoint(sample_graph, rules, EngineSettings(workers=1))
        parallel, _ = fixpoint(sample_graph, rules, EngineSettings(workers=4))
        assert dumps_graph(serial) == dumps_graph(parallel)


class TestSpouseDeath:
    """A marriage ending on a spouse's date of death."""

    @pytest.fixture()
    def graph(self) -> KnowledgeGraph:
        marriage = st("wd:Q1", "wd:P26", "wd:Q2", validity=during(utc(1960), utc(1965)))
        death = Statement(
            StatementKind.ST,
            Iri("wd:Q1"),
            Iri("wd:P570"),
            DataValue("1965-01-01T00:00:00Z", XSD_DATETIME),
        )
        return KnowledgeGraph([SPOUSE_SYMMETRIC, marriage, death])

    def test_end_cause_added_and_mirrored(self, graph: KnowledgeGraph) -> None:
        rules = load_builtin_rules(["symmetry", "spouse_death"])
        result, report = fixpoint(graph, rules)
        marriage = during(utc(1960), utc(1965))
        widowed = st(
            "wd:Q1", "wd:P26", "wd:Q2", validity=marriage, causality=ended("wd:Q99521170")
        )
        mirrored = st(
            "wd:Q2", "wd:P26", "wd:Q1", validity=marriage, causality=ended("qr:deathOfObject")
        )
        assert widowed in result
        assert mirrored in result
        assert report.per_rule == {"symmetry": 2, "spouse_death": 1}

    def test_death_on_other_day_changes_nothing(self, graph: KnowledgeGraph) -> None:
        graph = KnowledgeGraph(s for s in graph if s.prop != Iri("wd:P570"))
        graph.insert(
            Statement(
                StatementKind.ST,
                Iri("wd:Q1"),
                Iri("wd:P570"),
                DataValue("1970-01-01T00:00:00Z", XSD_DATETIME),
            )
        )
        (rule,) = load_builtin_rules({"spouse_death"})
        assert apply_rule(graph, rule).statements == []


class TestSymmetryDropsSequence:
    """Swapped statements lose their ordering, so an ordered one gains an unordered twin."""

    def test_unordered_copy_of_original(self) -> None:
        ordered = st(
            "wd:Q1",
            "wd:P26",
            "wd:Q2",
            validity=during(utc(1990), utc(2000)),
            sequence=SequenceNode(next=Iri("wd:Q3")),
        )
        graph = KnowledgeGraph([SPOUSE_SYMMETRIC, ordered])
        result, report = fixpoint(graph, load_builtin_rules({"symmetry"}))
        unordered = st("wd:Q1", "wd:P26", "wd:Q2", validity=during(utc(1990), utc(2000)))
        assert unordered in result
        assert ordered in result
        assert report.inferred == 2


# ---------------------------------------------------------------------------
# Class hierarchies against an independent closure
# ---------------------------------------------------------------------------

INSTANCE_OF = Iri("wd:P31")
SUBCLASS_OF = Iri("wd:P279")
ENDPOINTS = [None, 0, 10, 20, 30, 40]

# (property, subject, object, first day, last day); None days are unbounded.
Edge: TypeAlias = tuple[Iri, Iri, Iri, int | None, int | None]


def _on_day(n: int | None) -> datetime | None:
    return None if n is None else utc(2000) + timedelta(days=n)


def edge_statement(edge: Edge) -> Statement:
    prop, subject, obj, first, last = edge
    return Statement(
        StatementKind.ST, subject, prop, obj, validity=during(_on_day(first), _on_day(last))
    )


def random_taxonomy(seed: int) -> list[Edge]:
    """Up to 40 classes and 60 edges with random (possibly open) day ranges."""
    rng = random.Random(seed)
    classes = [Iri(f"wd:Q{100 + n}") for n in range(rng.randint(2, 40))]
    items = [Iri(f"wd:Q{n}") for n in range(1, 6)]
    edges: list[Edge] = []
    for _ in range(rng.randint(1, 60)):
        first, last = rng.choice(ENDPOINTS), rng.choice(ENDPOINTS)
        if first is not None and last is not None and first > last:
            first, last = last, first
        if rng.random() < 0.3:
            edges.append((INSTANCE_OF, rng.choice(items), rng.choice(classes), first, last))
        else:
            edges.append((SUBCLASS_OF, rng.choice(classes), rng.choice(classes), first, last))
    return edges


def _overlap(
    a: tuple[int | None, int | None], b: tuple[int | None, int | None]
) -> tuple[int | None, int | None] | None:
    starts = [n for n in (a[0], b[0]) if n is not None]
    ends = [n for n in (a[1], b[1]) if n is not None]
    first = max(starts) if starts else None
    last = min(ends) if ends else None
    if first is not None and last is not None and first > last:
        return None
    return first, last


def hierarchy_closure(edges: list[Edge]) -> set[Edge]:
    """Join instance-of and subclass-of edges with subclass-of until nothing changes."""
    known = set(edges)
    while True:
        found = set()
        for prop, subject, middle, first, last in known:
            for link, lower, obj, link_first, link_last in known:
                if link != SUBCLASS_OF or lower != middle:
                    continue
                days = _overlap((first, last), (link_first, link_last))
                if days is not None:
                    found.add((prop, subject, obj, *days))
        if found <= known:
            return known
        known |= found


class TestHierarchyClosure:
    """instance_of and subclass_of saturate to the transitive closure."""

    def test_chain_of_depth_five(self) -> None:
        classes = [Iri(f"wd:Q{100 + n}") for n in range(6)]
        edges: list[Edge] = [(INSTANCE_OF, Iri("wd:Q1"), classes[0], None, None)]
        edges += [(SUBCLASS_OF, lower, upper, None, None) for lower, upper in pairwise(classes)]
        rules = load_builtin_rules(["instance_of", "subclass_of"])
        result, report = fixpoint(KnowledgeGraph(map(edge_statement, edges)), rules)

        for n, cls in enumerate(classes):
            assert edge_statement((INSTANCE_OF, Iri("wd:Q1"), cls, None, None)) in result
            for upper in classes[n + 1 :]:
                assert edge_statement((SUBCLASS_OF, cls, upper, None, None)) in result
        assert report.inferred == 15
        assert report.per_rule == {"instance_of": 5, "subclass_of": 10}

    def test_disjoint_ranges_do_not_chain(self) -> None:
        edges: list[Edge] = [
            (INSTANCE_OF, Iri("wd:Q1"), Iri("wd:Q100"), 0, 10),
            (SUBCLASS_OF, Iri("wd:Q100"), Iri("wd:Q101"), 20, 30),
        ]
        rules = load_builtin_rules(["instance_of", "subclass_of"])
        _, report = fixpoint(KnowledgeGraph(map(edge_statement, edges)), rules)
        assert report.inferred == 0

    @pytest.mark.parametrize("seed", range(100))
    def test_random_taxonomy_matches_closure(self, seed: int) -> None:
        edges = random_taxonomy(seed)
        rules = load_builtin_rules(["instance_of", "subclass_of"])
        result, report = fixpoint(KnowledgeGraph(map(edge_statement, edges)), rules)
        assert not report.limit_hit
        assert set(result) == {edge_statement(edge) for edge in hierarchy_closure(edges)}

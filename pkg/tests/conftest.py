"""Shared pytest fixtures for the qualifier-reasoner test suite."""

from __future__ import annotations

from datetime import UTC, datetime
from pathlib import Path

import pytest

from qualifier_reasoner.knowledge.graph import KnowledgeGraph
from qualifier_reasoner.knowledge.models import Statement, StatementKind
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.sorts.causality import Causality
from qualifier_reasoner.sorts.sequence import SequenceNode
from qualifier_reasoner.sorts.validity import (
    ContainmentTable,
    TimeInterval,
    ValidityContext,
)
from qualifier_reasoner.values import Iri

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def utc(year: int, month: int = 1, day: int = 1) -> datetime:
    """Midnight UTC on the given day."""
    return datetime(year, month, day, tzinfo=UTC)


def during(start: datetime | None, end: datetime | None) -> ValidityContext:
    """Validity context holding only a time interval."""
    return ValidityContext(time=TimeInterval(start, end))


def st(subject: str, prop: str, value: str, **sorts: object) -> Statement:
    """Shorthand for an ``st`` statement between entities."""
    return Statement(StatementKind.ST, Iri(subject), Iri(prop), Iri(value), **sorts)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@pytest.fixture()
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture()
def rules_dir() -> Path:
    return FIXTURES_DIR / "rules"


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@pytest.fixture()
def prefixes() -> PrefixTable:
    return DEFAULT_PREFIXES


@pytest.fixture()
def containment() -> ContainmentTable:
    """North Carolina inside Southern Colonies inside British America."""
    return ContainmentTable(
        [
            (Iri("wd:Q1454"), Iri("wd:Q1130567")),
            (Iri("wd:Q1130567"), Iri("wd:Q2057640")),
        ],
        regions=[Iri("wd:Q30")],
    )


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@pytest.fixture()
def scott_marriage() -> Statement:
    """George C. Scott married Colleen Dewhurst 1960-1965, ended by divorce."""
    return st(
        "wd:Q182450",
        "wd:P26",
        "wd:Q253916",
        validity=during(utc(1960), utc(1965)),
        causality=Causality(end_cause=frozenset({Iri("wd:Q93190")})),
    )


@pytest.fixture()
def dewhurst_marriage() -> Statement:
    """The symmetric counterpart of :func:`scott_marriage`."""
    return st(
        "wd:Q253916",
        "wd:P26",
        "wd:Q182450",
        validity=during(utc(1960), utc(1965)),
        causality=Causality(end_cause=frozenset({Iri("wd:Q93190")})),
    )


@pytest.fixture()
def spouse_symmetric() -> Statement:
    """Property constraint declaring spouse symmetric."""
    return st("wd:P26", "wd:P2302", "wd:Q21510862")


@pytest.fixture()
def north_carolina_colonies() -> Statement:
    """North Carolina part of the Southern Colonies."""
    return st(
        "wd:Q1454",
        "wd:P361",
        "wd:Q1130567",
        validity=during(utc(1775, 5, 10), utc(1776, 7, 4)),
    )


@pytest.fixture()
def colonies_empire() -> Statement:
    """Southern Colonies part of the British Empire."""
    return st(
        "wd:Q1130567",
        "wd:P361",
        "wd:Q8680",
        validity=during(utc(1732, 6, 9), utc(1776, 7, 4)),
    )


@pytest.fixture()
def obama_presidency() -> Statement:
    """Barack Obama position held: 44th President, after Bush, before Trump."""
    return st(
        "wd:Q76",
        "wd:P39",
        "wd:Q11696",
        validity=during(utc(2009, 1, 20), utc(2017, 1, 20)),
        sequence=SequenceNode(Iri("wd:Q207"), Iri("wd:Q22686"), 44),
    )


@pytest.fixture()
def sample_graph(
    scott_marriage: Statement,
    spouse_symmetric: Statement,
    north_carolina_colonies: Statement,
    colonies_empire: Statement,
    obama_presidency: Statement,
) -> KnowledgeGraph:
    return KnowledgeGraph(
        [
            scott_marriage,
            spouse_symmetric,
            north_carolina_colonies,
            colonies_empire,
            obama_presidency,
        ]
    )

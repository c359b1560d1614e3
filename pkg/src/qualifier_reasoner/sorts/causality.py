"""Causality sort: the causes that started and ended a statement."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.exceptions import SortDomainError
from qualifier_reasoner.values import Iri

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from qualifier_reasoner.prefixes import PrefixTable

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

DROP_TOKEN = "!drop"


@dataclass(frozen=True, slots=True)
class Causality:
    """Sets of has-cause and end-cause entities.

    ``no_value`` marks the extension value for a statement known to have no
    cause; it is the identity of :func:`union_cause` and carries no sets.
    """

    has_cause: frozenset[Iri] = field(default_factory=frozenset)
    end_cause: frozenset[Iri] = field(default_factory=frozenset)
    no_value: bool = False

    def __post_init__(self) -> None:
        if self.no_value and (self.has_cause or self.end_cause):
            msg = "the noValue causality carries no causes"
            raise SortDomainError(msg)

    @property
    def is_empty(self) -> bool:
        return not (self.has_cause or self.end_cause or self.no_value)


EMPTY_CAUSE = Causality()
NO_VALUE_CAUSE = Causality(no_value=True)


def _entities(causes: Iri | Iterable[Iri]) -> frozenset[Iri]:
    members = frozenset((causes,)) if isinstance(causes, Iri) else frozenset(causes)
    for member in members:
        if not isinstance(member, Iri):
            msg = f"cause {member!r} is not an entity"
            raise TypeError(msg)
    return members


def _require_value(c: Causality, operation: str) -> None:
    if c.no_value:
        msg = f"{operation} is unspecified for the noValue causality"
        raise SortDomainError(msg)


def add_end_cause(causes: Iri | Iterable[Iri], c: Causality) -> Causality:
    _require_value(c, "addEndCause")
    return Causality(c.has_cause, c.end_cause | _entities(causes))


def add_has_cause(causes: Iri | Iterable[Iri], c: Causality) -> Causality:
    _require_value(c, "addHasCause")
    return Causality(c.has_cause | _entities(causes), c.end_cause)


def get_end_cause(c: Causality) -> frozenset[Iri]:
    return c.end_cause


def get_has_cause(c: Causality) -> frozenset[Iri]:
    return c.has_cause


def union_cause(a: Causality, b: Causality) -> Causality:
    if a.no_value:
        return b
    if b.no_value:
        return a
    return Causality(a.has_cause | b.has_cause, a.end_cause | b.end_cause)


class InverseCauseMap:
    """Involutive entity mapping applied when a statement is inverted.

    Unmapped entities are their own inverse. An entity mapped to ``None``
    is dropped from the inverted statement.
    """

    def __init__(self, pairs: Iterable[tuple[Iri, Iri | None]] = ()) -> None:
        self._map: dict[Iri, Iri | None] = {}
        for entity, inverse in pairs:
            self.add(entity, inverse)

    def add(self, entity: Iri, inverse: Iri | None) -> None:
        self._map[entity] = inverse
        if inverse is not None:
            self._map[inverse] = entity

    def __len__(self) -> int:
        return len(self._map)

    def inverse(self, entity: Iri) -> Iri | None:
        return self._map.get(entity, entity)

    @classmethod
    def default(cls, death_of_subject: Iri, death_of_object: Iri) -> InverseCauseMap:
        return cls([(death_of_subject, death_of_object)])

    def load_csv(self, path: Path, prefixes: PrefixTable) -> InverseCauseMap:
        """Add ``entity,inverse`` rows from ``path``; ``!drop`` drops the entity."""
        with path.open(encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                target = row["inverse"].strip()
                self.add(
                    prefixes.iri(row["entity"].strip()),
                    None if target == DROP_TOKEN else prefixes.iri(target),
                )
        logger.info("inverse_map_loaded", path=str(path), entries=len(self._map))
        return self


def _invert_all(causes: frozenset[Iri], inverse_map: InverseCauseMap) -> frozenset[Iri]:
    inverted = (inverse_map.inverse(entity) for entity in causes)
    return frozenset(entity for entity in inverted if entity is not None)


def inverse_cause(c: Causality, inverse_map: InverseCauseMap) -> Causality:
    if c.no_value:
        return c
    return Causality(
        _invert_all(c.has_cause, inverse_map),
        _invert_all(c.end_cause, inverse_map),
    )

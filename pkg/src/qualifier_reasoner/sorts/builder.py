"""Build the five sort values of a statement from its qualifier bag.

Every qualifier pair ends up in exactly one place: the sort its category
names, or (with a diagnostic) the annotations, so nothing is dropped.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.exceptions import SortDomainError
from qualifier_reasoner.sorts.annotations import EMPTY_ANNOTATIONS, Annotations
from qualifier_reasoner.sorts.categories import (
    DEFAULT_CATEGORY_MAP,
    UNSLOTTED_QUALIFIERS,
    CategoryMap,
    QualifierRole,
    SortCategory,
)
from qualifier_reasoner.sorts.causality import EMPTY_CAUSE, Causality
from qualifier_reasoner.sorts.provenance import EMPTY_PROVENANCE, Provenance
from qualifier_reasoner.sorts.sequence import EMPTY_SEQUENCE, SequenceNode
from qualifier_reasoner.sorts.validity import (
    EMPTY_VALIDITY,
    UNIVERSAL_INTERVAL,
    UNIVERSAL_SPACE,
    ContainmentTable,
    SpaceRegion,
    TimeInterval,
    ValidityContext,
    dimensions,
)
from qualifier_reasoner.values import (
    DataValue,
    Iri,
    QualifierBag,
    SpecialValue,
    Value,
    parse_datetime,
)

if TYPE_CHECKING:
    from datetime import datetime

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)


@dataclass(slots=True)
class BuiltSorts:
    """Sort values built from one bag, plus what happened along the way."""

    validity: ValidityContext = EMPTY_VALIDITY
    causality: Causality = EMPTY_CAUSE
    sequence: SequenceNode = EMPTY_SEQUENCE
    annotations: Annotations = EMPTY_ANNOTATIONS
    provenance: Provenance = EMPTY_PROVENANCE
    diagnostics: list[str] = field(default_factory=list)
    routed: Counter[SortCategory] = field(default_factory=Counter)


@dataclass(slots=True)
class _TimeSlot:
    moment: datetime | None = None
    pair: tuple[Iri, Value] | None = None


class _Accumulator:
    """Mutable state while walking a bag; frozen into :class:`BuiltSorts`."""

    def __init__(self, containment: ContainmentTable | None) -> None:
        self.containment = containment
        self.start = _TimeSlot()
        self.end = _TimeSlot()
        self.point = _TimeSlot()
        self.space: Iri | None = None
        self.dims: dict[Iri, set[Iri]] = {}
        self.has_cause: set[Iri] = set()
        self.end_cause: set[Iri] = set()
        self.previous: Iri | None = None
        self.next: Iri | None = None
        self.ordinal: int | None = None
        self.sources: set[Iri] = set()
        self.annotations: dict[Iri, set[Value]] = {}
        self.diagnostics: list[str] = []
        self.routed: Counter[SortCategory] = Counter()

    # -- helpers ------------------------------------------------------------

    def diagnose(self, qualifier: Iri, message: str) -> None:
        self.diagnostics.append(f"{qualifier}: {message}")
        logger.debug("qualifier_diagnostic", qualifier=str(qualifier), detail=message)

    def annotate(self, qualifier: Iri, value: Value) -> None:
        self.annotations.setdefault(qualifier, set()).add(value)
        self.routed[SortCategory.ANNOTATION] += 1

    def fallback(self, qualifier: Iri, value: Value, reason: str) -> None:
        self.diagnose(qualifier, f"{reason}; kept as annotation")
        self.annotate(qualifier, value)

    def take(self, category: SortCategory) -> None:
        self.routed[category] += 1

    # -- per role -----------------------------------------------------------

    def time(self, slot: _TimeSlot, qualifier: Iri, value: Value) -> None:
        if slot.pair is not None:
            self.fallback(qualifier, value, "duplicate time qualifier")
            return
        if value is SpecialValue.NO_VALUE:
            slot.pair = (qualifier, value)
        elif value is SpecialValue.SOME_VALUE:
            self.diagnose(qualifier, "unknown time read as undefined endpoint")
            slot.pair = (qualifier, value)
        elif isinstance(value, DataValue) and value.is_temporal:
            try:
                slot.moment = parse_datetime(value.lexical)
            except ValueError:
                self.fallback(qualifier, value, f"unparseable date {value.lexical!r}")
                return
            slot.pair = (qualifier, value)
        else:
            self.fallback(qualifier, value, "time qualifier without a date value")
            return
        self.take(SortCategory.VALIDITY)

    def place(self, qualifier: Iri, value: Value) -> None:
        if not isinstance(value, Iri):
            self.fallback(qualifier, value, "space qualifier without a region entity")
            return
        if self.space is not None:
            self.fallback(qualifier, value, "duplicate space qualifier")
            return
        if self.containment is not None and value not in self.containment:
            self.diagnose(qualifier, f"region {value} is not in the containment table")
        self.space = value
        self.take(SortCategory.VALIDITY)

    def dimension(self, qualifier: Iri, value: Value) -> None:
        if not isinstance(value, Iri):
            self.fallback(qualifier, value, "dimension qualifier without an entity")
            return
        self.dims.setdefault(qualifier, set()).add(value)
        self.take(SortCategory.VALIDITY)

    def entity_into(self, target: set[Iri], category: SortCategory, qualifier: Iri, value: Value) -> None:
        if not isinstance(value, Iri):
            self.fallback(qualifier, value, f"{category.value} qualifier without an entity")
            return
        target.add(value)
        self.take(category)

    def pointer(self, role: QualifierRole, qualifier: Iri, value: Value) -> None:
        if not isinstance(value, Iri):
            self.fallback(qualifier, value, "sequence qualifier without an entity")
            return
        current = self.previous if role is QualifierRole.SEQ_PREV else self.next
        if current is not None:
            logger.warning(
                "duplicate_sequence_pointer",
                qualifier=str(qualifier),
                kept=str(current),
                extra=str(value),
            )
            self.fallback(qualifier, value, f"duplicate sequence pointer (kept {current})")
            return
        if role is QualifierRole.SEQ_PREV:
            self.previous = value
        else:
            self.next = value
        self.take(SortCategory.SEQUENCE)

    def rank(self, qualifier: Iri, value: Value) -> None:
        lexical = value.lexical.lstrip("+") if isinstance(value, DataValue) else ""
        if not lexical.isdigit():
            self.fallback(qualifier, value, "ordinal is not a natural number")
            return
        if self.ordinal is not None:
            self.fallback(qualifier, value, "duplicate ordinal")
            return
        self.ordinal = int(lexical)
        self.take(SortCategory.SEQUENCE)

    # -- result -------------------------------------------------------------

    def _release(self, slot: _TimeSlot, reason: str) -> None:
        if slot.pair is None:
            return
        qualifier, value = slot.pair
        self.routed[SortCategory.VALIDITY] -= 1
        self.fallback(qualifier, value, reason)
        slot.moment = None
        slot.pair = None

    def _time(self) -> TimeInterval:
        if self.start.pair is not None or self.end.pair is not None:
            self._release(self.point, "point in time alongside start/end")
            try:
                return TimeInterval(self.start.moment, self.end.moment)
            except SortDomainError as exc:
                self._release(self.start, str(exc))
                self._release(self.end, "end of an invalid interval")
                return UNIVERSAL_INTERVAL
        if self.point.pair is not None:
            return TimeInterval(self.point.moment, self.point.moment)
        return UNIVERSAL_INTERVAL

    def result(self) -> BuiltSorts:
        time = self._time()
        space = SpaceRegion(self.space) if self.space is not None else UNIVERSAL_SPACE
        return BuiltSorts(
            validity=ValidityContext(time, space, dimensions(self.dims)),
            causality=Causality(frozenset(self.has_cause), frozenset(self.end_cause)),
            sequence=SequenceNode(self.previous, self.next, self.ordinal),
            annotations=Annotations.from_mapping(self.annotations),
            provenance=Provenance(frozenset(self.sources)),
            diagnostics=self.diagnostics,
            routed=self.routed,
        )


def build_sorts(
    bag: QualifierBag,
    category_map: CategoryMap = DEFAULT_CATEGORY_MAP,
    containment: ContainmentTable | None = None,
) -> BuiltSorts:
    """Route every pair of ``bag`` into a sort value.

    Args:
        bag: Qualifier pairs of one statement.
        category_map: Qualifier categorization table.
        containment: When given, space regions missing from it are reported.

    Returns:
        The five sort values with diagnostics and per-sort pair counts.
    """
    acc = _Accumulator(containment)
    for qualifier, value in bag:
        entry = category_map.categorize(qualifier)
        role = entry.role
        if role is QualifierRole.TIME_START:
            acc.time(acc.start, qualifier, value)
        elif role is QualifierRole.TIME_END:
            acc.time(acc.end, qualifier, value)
        elif role is QualifierRole.POINT_IN_TIME:
            acc.time(acc.point, qualifier, value)
        elif role is QualifierRole.SPACE:
            acc.place(qualifier, value)
        elif role is QualifierRole.DIMENSION:
            acc.dimension(qualifier, value)
        elif role is QualifierRole.CAUSE_HAS:
            acc.entity_into(acc.has_cause, SortCategory.CAUSALITY, qualifier, value)
        elif role is QualifierRole.CAUSE_END:
            acc.entity_into(acc.end_cause, SortCategory.CAUSALITY, qualifier, value)
        elif role in (QualifierRole.SEQ_PREV, QualifierRole.SEQ_NEXT):
            acc.pointer(role, qualifier, value)
        elif role is QualifierRole.SEQ_ORDINAL:
            acc.rank(qualifier, value)
        elif role is QualifierRole.SOURCE:
            acc.entity_into(acc.sources, SortCategory.PROVENANCE, qualifier, value)
        else:
            if qualifier in UNSLOTTED_QUALIFIERS:
                acc.diagnose(qualifier, "no validity slot for this qualifier; kept as annotation")
            acc.annotate(qualifier, value)
    return acc.result()

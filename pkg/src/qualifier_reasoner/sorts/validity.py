"""Validity sort: instants, time intervals, spatial regions and contexts.

A validity context is a region of the time x space product plus optional
extra dimensions. The universal context (``EMPTY_VALIDITY``) means the
statement holds everywhere and always; a context is *bottom* when any of
its components is empty.

Instants are aware UTC ``datetime`` objects; ``None`` stands for the
undefined instant, read as -inf for a start and +inf for an end.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import TYPE_CHECKING, TypeAlias

import structlog

from qualifier_reasoner.exceptions import RegionLookupError, SortDomainError
from qualifier_reasoner.values import Iri, to_second

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from pathlib import Path

    from qualifier_reasoner.prefixes import PrefixTable

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

Instant: TypeAlias = datetime | None
Duration: TypeAlias = int | None


# ---------------------------------------------------------------------------
# Instants
# ---------------------------------------------------------------------------


def _require(x: Instant, what: str) -> datetime:
    if x is None:
        msg = f"{what} is undefined"
        raise SortDomainError(msg)
    return x


def instant_lt(a: Instant, b: Instant) -> bool:
    """Strict order on defined instants."""
    return _require(a, "left instant") < _require(b, "right instant")


def instant_le(a: Instant, b: Instant) -> bool:
    return _require(a, "left instant") <= _require(b, "right instant")


def instant_min(a: Instant, b: Instant) -> Instant:
    """Earlier of two instants; undefined absorbs (hull reading)."""
    if a is None or b is None:
        return None
    return min(a, b)


def instant_max(a: Instant, b: Instant) -> Instant:
    """Later of two instants; undefined absorbs (hull reading)."""
    if a is None or b is None:
        return None
    return max(a, b)


def instant_union(a: Instant, b: Instant) -> Instant:
    return a if a == b else None


def instant_inter(a: Instant, b: Instant) -> Instant:
    return a if a == b else None


def instant_intersects(a: Instant, b: Instant) -> bool:
    return a is not None and a == b


def add_duration(x: Instant, seconds: Duration) -> Instant:
    if x is None or seconds is None:
        return None
    return x + timedelta(seconds=seconds)


def seconds_between(a: Instant, b: Instant) -> Duration:
    if a is None or b is None:
        return None
    return int((b - a).total_seconds())


# ---------------------------------------------------------------------------
# Time intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TimeInterval:
    """Closed interval ``[start, end]`` or the empty interval.

    ``TimeInterval()`` is the universal interval; ``BOTTOM_INTERVAL`` is
    the only empty one.
    """

    start: Instant = None
    end: Instant = None
    empty: bool = False

    def __post_init__(self) -> None:
        if self.start is not None:
            object.__setattr__(self, "start", to_second(self.start))
        if self.end is not None:
            object.__setattr__(self, "end", to_second(self.end))
        if self.empty and (self.start is not None or self.end is not None):
            msg = "the empty interval has no endpoints"
            raise SortDomainError(msg)
        if self.start is not None and self.end is not None and self.start > self.end:
            msg = f"interval start {self.start.isoformat()} is after end {self.end.isoformat()}"
            raise SortDomainError(msg)

    @property
    def is_universal(self) -> bool:
        return not self.empty and self.start is None and self.end is None


UNIVERSAL_INTERVAL = TimeInterval()
BOTTOM_INTERVAL = TimeInterval(empty=True)


def interval(start: Instant, end: Instant) -> TimeInterval:
    """Build ``[start, end]``; raises :class:`SortDomainError` if start > end."""
    return TimeInterval(start, end)


def interval_for(start: Instant, seconds: Duration) -> TimeInterval:
    """Build the interval starting at ``start`` that lasts ``seconds``."""
    if seconds is not None and seconds < 0:
        msg = f"negative duration: {seconds}"
        raise SortDomainError(msg)
    return TimeInterval(start, add_duration(start, seconds))


def start_time(i: TimeInterval) -> Instant:
    if i.empty:
        msg = "the empty interval has no start"
        raise SortDomainError(msg)
    return i.start


def end_time(i: TimeInterval) -> Instant:
    if i.empty:
        msg = "the empty interval has no end"
        raise SortDomainError(msg)
    return i.end


def duration(i: TimeInterval) -> Duration:
    """Length in seconds; ``None`` when an endpoint is undefined."""
    return seconds_between(start_time(i), end_time(i))


def inside(x: Instant, i: TimeInterval) -> bool:
    moment = _require(x, "instant")
    if i.empty:
        return False
    if i.start is not None and moment < i.start:
        return False
    return not (i.end is not None and moment > i.end)


def disjoint(a: TimeInterval, b: TimeInterval) -> bool:
    if a.empty or b.empty:
        return True
    if a.end is not None and b.start is not None and a.end < b.start:
        return True
    return b.end is not None and a.start is not None and b.end < a.start


def intersects_interval(a: TimeInterval, b: TimeInterval) -> bool:
    return not disjoint(a, b)


def incl_interval(a: TimeInterval, b: TimeInterval) -> bool:
    """True iff every instant inside ``a`` is inside ``b``."""
    if a.empty:
        return True
    if b.empty:
        return False
    if b.start is not None and (a.start is None or a.start < b.start):
        return False
    return not (b.end is not None and (a.end is None or a.end > b.end))


def _later_start(a: Instant, b: Instant) -> Instant:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _earlier_end(a: Instant, b: Instant) -> Instant:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def inter_interval(a: TimeInterval, b: TimeInterval) -> TimeInterval:
    if disjoint(a, b):
        return BOTTOM_INTERVAL
    return TimeInterval(_later_start(a.start, b.start), _earlier_end(a.end, b.end))


def union_interval(a: TimeInterval, b: TimeInterval) -> TimeInterval:
    """Hull of two overlapping intervals; universal when they are disjoint.

    The empty interval is the identity.
    """
    if a.empty:
        return b
    if b.empty:
        return a
    if disjoint(a, b):
        return UNIVERSAL_INTERVAL
    return TimeInterval(instant_min(a.start, b.start), instant_max(a.end, b.end))


# ---------------------------------------------------------------------------
# Space
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SpaceRegion:
    """A named region, the universal space or the empty space."""

    region: Iri | None = None
    empty: bool = False

    def __post_init__(self) -> None:
        if self.empty and self.region is not None:
            msg = "the empty space names no region"
            raise SortDomainError(msg)

    @property
    def is_universal(self) -> bool:
        return not self.empty and self.region is None


UNIVERSAL_SPACE = SpaceRegion()
BOTTOM_SPACE = SpaceRegion(empty=True)


def region(iri: Iri) -> SpaceRegion:
    return SpaceRegion(iri)


class ContainmentTable:
    """Reflexive-transitive containment between named regions.

    Every region mentioned in a fact is known; other regions can be
    registered explicitly. Looking up an unknown region raises
    :class:`RegionLookupError`.
    """

    def __init__(
        self,
        facts: Iterable[tuple[Iri, Iri]] = (),
        regions: Iterable[Iri] = (),
    ) -> None:
        self._parents: dict[Iri, set[Iri]] = {}
        self._closure: dict[Iri, frozenset[Iri]] | None = None
        for known in regions:
            self.register(known)
        for inner, outer in facts:
            self.add(inner, outer)

    def register(self, iri: Iri) -> None:
        if iri not in self._parents:
            self._parents[iri] = set()
            self._closure = None

    def add(self, inner: Iri, outer: Iri) -> None:
        self.register(inner)
        self.register(outer)
        self._parents[inner].add(outer)
        self._closure = None

    def __contains__(self, iri: object) -> bool:
        return iri in self._parents

    def __len__(self) -> int:
        return len(self._parents)

    def facts(self) -> list[tuple[Iri, Iri]]:
        return sorted(
            (inner, outer) for inner, outers in self._parents.items() for outer in outers
        )

    def _ancestors(self) -> dict[Iri, frozenset[Iri]]:
        if self._closure is None:
            closure: dict[Iri, frozenset[Iri]] = {}
            for start in self._parents:
                seen = {start}
                stack = [start]
                while stack:
                    for parent in self._parents[stack.pop()]:
                        if parent not in seen:
                            seen.add(parent)
                            stack.append(parent)
                closure[start] = frozenset(seen)
            self._closure = closure
        return self._closure

    def inside(self, inner: Iri, outer: Iri) -> bool:
        if inner == outer:
            return True
        ancestors = self._ancestors()
        for iri in (inner, outer):
            if iri not in ancestors:
                msg = f"unknown region {iri}"
                raise RegionLookupError(msg)
        return outer in ancestors[inner]

    @classmethod
    def from_csv(cls, path: Path, prefixes: PrefixTable) -> ContainmentTable:
        """Load ``inner,outer`` rows (header required)."""
        table = cls()
        with path.open(encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                table.add(prefixes.iri(row["inner"].strip()), prefixes.iri(row["outer"].strip()))
        logger.info("containment_loaded", path=str(path), regions=len(table))
        return table


EMPTY_CONTAINMENT = ContainmentTable()


def inside_space(
    a: SpaceRegion, b: SpaceRegion, containment: ContainmentTable = EMPTY_CONTAINMENT
) -> bool:
    if a.empty or b.is_universal:
        return True
    if a.is_universal or b.empty:
        return False
    assert a.region is not None and b.region is not None
    return containment.inside(a.region, b.region)


def inter_space(
    a: SpaceRegion, b: SpaceRegion, containment: ContainmentTable = EMPTY_CONTAINMENT
) -> SpaceRegion:
    if a.empty or b.empty:
        return BOTTOM_SPACE
    if a.is_universal:
        return b
    if b.is_universal or a == b:
        return a
    if inside_space(a, b, containment):
        return a
    if inside_space(b, a, containment):
        return b
    return BOTTOM_SPACE


def union_space(
    a: SpaceRegion, b: SpaceRegion, containment: ContainmentTable = EMPTY_CONTAINMENT
) -> SpaceRegion:
    if a.empty:
        return b
    if b.empty or a == b:
        return a
    if a.is_universal or b.is_universal:
        return UNIVERSAL_SPACE
    if inside_space(a, b, containment):
        return b
    if inside_space(b, a, containment):
        return a
    return UNIVERSAL_SPACE


def intersects_space(
    a: SpaceRegion, b: SpaceRegion, containment: ContainmentTable = EMPTY_CONTAINMENT
) -> bool:
    return not inter_space(a, b, containment).empty


# ---------------------------------------------------------------------------
# Validity contexts
# ---------------------------------------------------------------------------

Dimensions: TypeAlias = frozenset[tuple[Iri, frozenset[Iri]]]


def dimensions(mapping: Mapping[Iri, Iterable[Iri]]) -> Dimensions:
    return frozenset((key, frozenset(values)) for key, values in mapping.items())


@dataclass(frozen=True, slots=True)
class ValidityContext:
    """Where and when a statement holds.

    ``dimensions`` constrains extra orthogonal axes (e.g. a work or taxon)
    by qualifier key; a missing key is unconstrained and an empty value set
    makes the context bottom.
    """

    time: TimeInterval = UNIVERSAL_INTERVAL
    space: SpaceRegion = UNIVERSAL_SPACE
    dimensions: Dimensions = field(default_factory=frozenset)

    @property
    def is_bottom(self) -> bool:
        return self.time.empty or self.space.empty or any(
            not values for _, values in self.dimensions
        )

    @property
    def is_empty(self) -> bool:
        """True for the universal context ``EMPTY_VALIDITY``."""
        return self == EMPTY_VALIDITY

    def dimension_map(self) -> dict[Iri, frozenset[Iri]]:
        return dict(self.dimensions)


EMPTY_VALIDITY = ValidityContext()
BOTTOM_VALIDITY = ValidityContext(BOTTOM_INTERVAL, BOTTOM_SPACE)


def time_validity(t: TimeInterval) -> ValidityContext:
    return ValidityContext(time=t)


def space_validity(s: SpaceRegion) -> ValidityContext:
    return ValidityContext(space=s)


def timespace_validity(t: TimeInterval, s: SpaceRegion) -> ValidityContext:
    return ValidityContext(t, s)


def set_time(c: ValidityContext, t: TimeInterval) -> ValidityContext:
    return ValidityContext(t, c.space, c.dimensions)


def set_space(c: ValidityContext, s: SpaceRegion) -> ValidityContext:
    return ValidityContext(c.time, s, c.dimensions)


def extract_time(c: ValidityContext) -> TimeInterval:
    return c.time


def extract_space(c: ValidityContext) -> SpaceRegion:
    return c.space


def _inter_dimensions(a: Dimensions, b: Dimensions) -> Dimensions:
    merged = dict(a)
    for key, values in b:
        merged[key] = merged[key] & values if key in merged else values
    return frozenset(merged.items())


def _union_dimensions(a: Dimensions, b: Dimensions) -> Dimensions:
    right = dict(b)
    return frozenset((key, values | right[key]) for key, values in a if key in right)


def inter_validity(
    a: ValidityContext,
    b: ValidityContext,
    containment: ContainmentTable = EMPTY_CONTAINMENT,
) -> ValidityContext:
    """Componentwise intersection; ``EMPTY_VALIDITY`` is the identity."""
    return ValidityContext(
        inter_interval(a.time, b.time),
        inter_space(a.space, b.space, containment),
        _inter_dimensions(a.dimensions, b.dimensions),
    )


def union_validity(
    a: ValidityContext,
    b: ValidityContext,
    containment: ContainmentTable = EMPTY_CONTAINMENT,
) -> ValidityContext:
    """Componentwise union; ``EMPTY_VALIDITY`` absorbs."""
    return ValidityContext(
        union_interval(a.time, b.time),
        union_space(a.space, b.space, containment),
        _union_dimensions(a.dimensions, b.dimensions),
    )


def intersects_validity(
    a: ValidityContext,
    b: ValidityContext,
    containment: ContainmentTable = EMPTY_CONTAINMENT,
) -> bool:
    return not inter_validity(a, b, containment).is_bottom


def incl_validity(
    a: ValidityContext,
    b: ValidityContext,
    containment: ContainmentTable = EMPTY_CONTAINMENT,
) -> bool:
    """True iff ``a`` denotes a sub-region of ``b``."""
    if a.is_bottom:
        return True
    if not (
        incl_interval(a.time, b.time) and inside_space(a.space, b.space, containment)
    ):
        return False
    own = a.dimension_map()
    return all(key in own and own[key] <= values for key, values in b.dimensions)

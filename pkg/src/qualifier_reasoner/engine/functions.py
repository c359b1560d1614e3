"""Implementations of the rule-language function symbols and predicates.

Each implementation takes the evaluation context followed by arguments
already coerced to the parameter sorts declared in
:mod:`qualifier_reasoner.rules.signature`.
"""

from __future__ import annotations

from datetime import datetime
from typing import TYPE_CHECKING, Any

from qualifier_reasoner.exceptions import EvaluationError
from qualifier_reasoner.rules.signature import Sort
from qualifier_reasoner.sorts import annotations as ann
from qualifier_reasoner.sorts import causality as cause
from qualifier_reasoner.sorts import provenance as prov
from qualifier_reasoner.sorts import sequence as sq
from qualifier_reasoner.sorts import validity as val
from qualifier_reasoner.sorts.annotations import Annotations
from qualifier_reasoner.sorts.causality import Causality
from qualifier_reasoner.sorts.provenance import Provenance
from qualifier_reasoner.sorts.sequence import SequenceNode
from qualifier_reasoner.sorts.validity import SpaceRegion, TimeInterval, ValidityContext
from qualifier_reasoner.values import (
    XSD_INTEGER,
    DataValue,
    Iri,
    SpecialValue,
    datetime_value,
    parse_datetime,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from qualifier_reasoner.engine.evaluate import EvaluationContext

# ---------------------------------------------------------------------------
# Coercion to parameter sorts
# ---------------------------------------------------------------------------

_SORT_TYPES: dict[Sort, type] = {
    Sort.INTERVAL: TimeInterval,
    Sort.SPACE: SpaceRegion,
    Sort.VALIDITY: ValidityContext,
    Sort.CAUSALITY: Causality,
    Sort.SEQUENCE: SequenceNode,
    Sort.ANNOTATIONS: Annotations,
    Sort.PROVENANCE: Provenance,
}


def _fail(value: Any, sort: Sort) -> EvaluationError:
    return EvaluationError(f"expected {sort.value}, got {value!r}")


def _as_instant(value: Any) -> datetime | None:
    if value is None or value is SpecialValue.UNDEFINED:
        return None
    if isinstance(value, datetime):
        return value
    if isinstance(value, DataValue) and value.is_temporal:
        try:
            return parse_datetime(value.lexical)
        except ValueError as exc:
            raise EvaluationError(f"bad date literal {value.lexical!r}") from exc
    raise _fail(value, Sort.INSTANT)


def _as_nat(value: Any) -> int:
    if isinstance(value, DataValue) and value.datatype == XSD_INTEGER:
        try:
            value = int(value.lexical)
        except ValueError as exc:
            raise EvaluationError(f"bad integer literal {value.lexical!r}") from exc
    if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return value
    raise _fail(value, Sort.NAT)


def _as_value(value: Any) -> Iri | DataValue | SpecialValue:
    if isinstance(value, Iri | DataValue | SpecialValue):
        return value
    if isinstance(value, datetime):
        return datetime_value(value)
    if value is None:
        return SpecialValue.UNDEFINED
    if isinstance(value, int) and not isinstance(value, bool):
        return DataValue(str(value), XSD_INTEGER)
    raise _fail(value, Sort.VALUE)


def coerce(value: Any, sort: Sort) -> Any:
    """Convert ``value`` to the Python form used for ``sort``.

    Raises:
        EvaluationError: If the value does not belong to the sort.
    """
    if sort is Sort.ANY:
        return value
    if sort is Sort.INSTANT:
        return _as_instant(value)
    if sort is Sort.NAT:
        return _as_nat(value)
    if sort is Sort.DURATION:
        if value is None or value is SpecialValue.UNDEFINED:
            return None
        return _as_nat(value)
    if sort in (Sort.ENTITY, Sort.PROPERTY):
        if isinstance(value, Iri):
            return value
        raise _fail(value, sort)
    if sort is Sort.VALUE:
        return _as_value(value)
    if sort is Sort.DATAVALUE:
        converted = _as_value(value)
        if isinstance(converted, DataValue):
            return converted
        raise _fail(value, sort)
    if sort in (Sort.ENTITY_SET, Sort.VALUE_SET):
        members = value if isinstance(value, frozenset) else frozenset({_as_value(value)})
        if sort is Sort.ENTITY_SET and not all(isinstance(m, Iri) for m in members):
            raise _fail(value, sort)
        return members
    if sort is Sort.UNDEFINED:
        return value
    expected = _SORT_TYPES[sort]
    if isinstance(value, expected):
        return value
    raise _fail(value, sort)


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------


def _previous(ctx: EvaluationContext, s: SequenceNode) -> Iri:
    """The previous pointer of ``s``.

    Raises:
        EvaluationError: If ``s`` has no previous pointer. The result is
            undefined there, so the engine skips the binding and records a
            diagnostic instead of deriving anything.
    """
    found = sq.previous(s)
    if found is None:
        msg = "previous of a sequence node without a previous pointer"
        raise EvaluationError(msg)
    return found


def _next(ctx: EvaluationContext, s: SequenceNode) -> Iri:
    """The next pointer of ``s``; undefined (EvaluationError) when absent, as for ``previous``."""
    found = sq.next_(s)
    if found is None:
        msg = "next of a sequence node without a next pointer"
        raise EvaluationError(msg)
    return found


def _seq(ctx: EvaluationContext, p: Iri, n: Iri, o: int | None = None) -> SequenceNode:
    return sq.seq(p, n, o)


def _single(ctx: EvaluationContext, members: frozenset[Any]) -> Any:
    if len(members) != 1:
        msg = f"expected a one-element set, got {len(members)} elements"
        raise EvaluationError(msg)
    (member,) = members
    return member


def _relation_property(ctx: EvaluationContext, members: frozenset[Any]) -> Iri:
    relation = _single(ctx, members)
    try:
        return ann.RELATION_PROPERTIES[relation]
    except KeyError:
        msg = f"{relation!r} is neither the instance-of nor the subclass-of relation"
        raise EvaluationError(msg) from None


IMPLEMENTATIONS: dict[str, Callable[..., Any]] = {
    # constants
    "undefined": lambda ctx: SpecialValue.UNDEFINED,
    "emptyValidity": lambda ctx: val.EMPTY_VALIDITY,
    "bottomValidity": lambda ctx: val.BOTTOM_VALIDITY,
    "universalInterval": lambda ctx: val.UNIVERSAL_INTERVAL,
    "bottomInterval": lambda ctx: val.BOTTOM_INTERVAL,
    "universalSpace": lambda ctx: val.UNIVERSAL_SPACE,
    "bottomSpace": lambda ctx: val.BOTTOM_SPACE,
    "emptyCause": lambda ctx: cause.EMPTY_CAUSE,
    "noValueCause": lambda ctx: cause.NO_VALUE_CAUSE,
    "emptySequence": lambda ctx: sq.EMPTY_SEQUENCE,
    "emptyAnnotations": lambda ctx: ann.EMPTY_ANNOTATIONS,
    "emptyProvenance": lambda ctx: prov.EMPTY_PROVENANCE,
    # instants and intervals
    "instant": lambda ctx, x: x,
    "interval": lambda ctx, s, e: val.interval(s, e),
    "intervalFor": lambda ctx, s, d: val.interval_for(s, d),
    "startTime": lambda ctx, i: val.start_time(i),
    "endTime": lambda ctx, i: val.end_time(i),
    "duration": lambda ctx, i: val.duration(i),
    "interInterval": lambda ctx, a, b: val.inter_interval(a, b),
    "unionInterval": lambda ctx, a, b: val.union_interval(a, b),
    # space
    "region": lambda ctx, e: val.region(e),
    "interSpace": lambda ctx, a, b: val.inter_space(a, b, ctx.containment),
    "unionSpace": lambda ctx, a, b: val.union_space(a, b, ctx.containment),
    # validity contexts
    "timeValidity": lambda ctx, t: val.time_validity(t),
    "spaceValidity": lambda ctx, s: val.space_validity(s),
    "timespaceValidity": lambda ctx, t, s: val.timespace_validity(t, s),
    "setTime": lambda ctx, c, t: val.set_time(c, t),
    "setSpace": lambda ctx, c, s: val.set_space(c, s),
    "extractTime": lambda ctx, c: val.extract_time(c),
    "extractSpace": lambda ctx, c: val.extract_space(c),
    "interValidity": lambda ctx, a, b: val.inter_validity(a, b, ctx.containment),
    "unionValidity": lambda ctx, a, b: val.union_validity(a, b, ctx.containment),
    # causality
    "addEndCause": lambda ctx, es, c: cause.add_end_cause(es, c),
    "addHasCause": lambda ctx, es, c: cause.add_has_cause(es, c),
    "getEndCause": lambda ctx, c: cause.get_end_cause(c),
    "getHasCause": lambda ctx, c: cause.get_has_cause(c),
    "unionCause": lambda ctx, a, b: cause.union_cause(a, b),
    "inverseCause": lambda ctx, c: cause.inverse_cause(c, ctx.inverse_map),
    # sequence
    "seq": _seq,
    "seqWithNext": lambda ctx, n: sq.seq_with_next(n),
    "seqWithPrev": lambda ctx, p: sq.seq_with_prev(p),
    "seqWithPrevious": lambda ctx, p: sq.seq_with_prev(p),
    "seqWithOrdinal": lambda ctx, o: sq.seq_with_ordinal(o),
    "previous": _previous,
    "next": _next,
    "ordinal": lambda ctx, s: sq.ordinal(s),
    "natPlus": lambda ctx, a, b: sq.nat_plus(a, b),
    "natMinus": lambda ctx, a, b: sq.nat_minus(a, b),
    # provenance
    "addSources": lambda ctx, es, p: prov.add_sources(es, p),
    "getSources": lambda ctx, p: prov.get_sources(p),
    "unionProv": lambda ctx, a, b: prov.union_prov(a, b),
    # annotations
    "addAnnotation": lambda ctx, a, q, v: ann.add_annotation(a, q, v),
    "getAnnotation": lambda ctx, a, q: ann.get_annotation(a, q),
    "getRelation": lambda ctx, a: ann.get_relation(a),
    "getClass": lambda ctx, a: ann.get_class(a),
    "single": _single,
    "relationProperty": _relation_property,
}


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def _normalize(value: Any) -> Any:
    """Comparable form: temporal literals become instants, integers ints."""
    if isinstance(value, DataValue):
        if value.is_temporal:
            return _as_instant(value)
        if value.datatype == XSD_INTEGER:
            return _as_nat(value)
    if value is SpecialValue.UNDEFINED:
        return None
    return value


def _equal(ctx: EvaluationContext, a: Any, b: Any) -> bool:
    return _normalize(a) == _normalize(b)


def _inside(ctx: EvaluationContext, x: Any, region: Any) -> bool:
    if isinstance(region, TimeInterval):
        return val.inside(_as_instant(x), region)
    if isinstance(region, SpaceRegion) and isinstance(x, SpaceRegion):
        return val.inside_space(x, region, ctx.containment)
    msg = f"inside is not defined for {type(x).__name__} and {type(region).__name__}"
    raise EvaluationError(msg)


def _incl(ctx: EvaluationContext, a: Any, b: Any) -> bool:
    if isinstance(a, TimeInterval) and isinstance(b, TimeInterval):
        return val.incl_interval(a, b)
    if isinstance(a, SpaceRegion) and isinstance(b, SpaceRegion):
        return val.inside_space(a, b, ctx.containment)
    if isinstance(a, ValidityContext) and isinstance(b, ValidityContext):
        return val.incl_validity(a, b, ctx.containment)
    if isinstance(a, frozenset) and isinstance(b, frozenset):
        return a <= b
    msg = f"incl is not defined for {type(a).__name__} and {type(b).__name__}"
    raise EvaluationError(msg)


PREDICATE_IMPLEMENTATIONS: dict[str, Callable[..., bool]] = {
    "testIntersectValidity": lambda ctx, a, b: val.intersects_validity(a, b, ctx.containment),
    "testIntersectInterval": lambda ctx, a, b: val.intersects_interval(a, b),
    "testIntersectSpace": lambda ctx, a, b: val.intersects_space(a, b, ctx.containment),
    "disjoint": lambda ctx, a, b: val.disjoint(a, b),
    "inside": _inside,
    "incl": _incl,
    "equal": _equal,
    "contains": lambda ctx, members, v: _normalize(v) in {_normalize(m) for m in members},
    "hasPrevious": lambda ctx, s: sq.has_previous(s),
    "hasNext": lambda ctx, s: sq.has_next(s),
    "hasOrdinal": lambda ctx, s: sq.has_ordinal(s),
}

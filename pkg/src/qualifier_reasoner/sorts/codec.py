"""Canonical JSON encoding of sort values.

Keys are camelCase and sorted, sets are rendered as sorted lists, absent
optional fields are omitted and an empty sort value encodes as ``{}``.
Two equal sort values therefore always encode to the same bytes.
"""

from __future__ import annotations

import json
from functools import singledispatch
from typing import Any

from qualifier_reasoner.exceptions import SortDecodeError, SortDomainError
from qualifier_reasoner.sorts.annotations import Annotations
from qualifier_reasoner.sorts.categories import SortCategory
from qualifier_reasoner.sorts.causality import NO_VALUE_CAUSE, Causality
from qualifier_reasoner.sorts.provenance import Provenance
from qualifier_reasoner.sorts.sequence import SequenceNode
from qualifier_reasoner.sorts.validity import (
    BOTTOM_INTERVAL,
    BOTTOM_SPACE,
    EMPTY_VALIDITY,
    UNIVERSAL_INTERVAL,
    UNIVERSAL_SPACE,
    SpaceRegion,
    TimeInterval,
    ValidityContext,
)
from qualifier_reasoner.values import (
    Iri,
    format_datetime,
    parse_datetime,
    value_from_json,
    value_sort_key,
    value_to_json,
)

SortValue = ValidityContext | Causality | SequenceNode | Annotations | Provenance


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _iris(members: frozenset[Iri]) -> list[str]:
    return sorted(member.text for member in members)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _interval_json(i: TimeInterval) -> dict[str, Any]:
    if i.empty:
        return {"empty": True}
    out: dict[str, Any] = {}
    if i.start is not None:
        out["start"] = format_datetime(i.start)
    if i.end is not None:
        out["end"] = format_datetime(i.end)
    return out


def _space_json(s: SpaceRegion) -> dict[str, Any]:
    if s.empty:
        return {"empty": True}
    if s.region is None:
        return {}
    return {"region": s.region.text}


@singledispatch
def sort_to_json(value: Any) -> dict[str, Any]:
    """Return the JSON object for a sort value (before serialisation)."""
    msg = f"not a sort value: {value!r}"
    raise TypeError(msg)


@sort_to_json.register
def _(value: ValidityContext) -> dict[str, Any]:
    if value == EMPTY_VALIDITY:
        return {}
    out: dict[str, Any] = {"space": _space_json(value.space), "time": _interval_json(value.time)}
    if value.dimensions:
        out["dimensions"] = {
            key.text: _iris(members)
            for key, members in sorted(value.dimensions, key=lambda item: item[0])
        }
    return out


@sort_to_json.register
def _(value: Causality) -> dict[str, Any]:
    if value.no_value:
        return {"noValue": True}
    if value.is_empty:
        return {}
    return {"endCause": _iris(value.end_cause), "hasCause": _iris(value.has_cause)}


@sort_to_json.register
def _(value: SequenceNode) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if value.previous is not None:
        out["previous"] = value.previous.text
    if value.next is not None:
        out["next"] = value.next.text
    if value.ordinal is not None:
        out["ordinal"] = value.ordinal
    return out


@sort_to_json.register
def _(value: Provenance) -> dict[str, Any]:
    if value.is_empty:
        return {}
    return {"sources": _iris(value.sources)}


@sort_to_json.register
def _(value: Annotations) -> dict[str, Any]:
    return {
        key.text: [value_to_json(item) for item in sorted(members, key=value_sort_key)]
        for key, members in value.attrs
    }


def encode_sort(value: SortValue) -> str:
    """Canonical JSON text of a sort value."""
    return canonical_json(sort_to_json(value))


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def _object(raw: Any, where: str) -> dict[str, Any]:
    if not isinstance(raw, dict):
        msg = f"{where}: expected a JSON object, got {type(raw).__name__}"
        raise SortDecodeError(msg)
    return raw


def _check_keys(raw: dict[str, Any], allowed: set[str], where: str) -> None:
    for key in raw:
        if key not in allowed:
            msg = f"{where}: unexpected key {key!r}"
            raise SortDecodeError(msg)


def _iri(raw: Any, where: str) -> Iri:
    if not isinstance(raw, str):
        msg = f"{where}: expected an IRI string, got {raw!r}"
        raise SortDecodeError(msg)
    try:
        return Iri(raw)
    except ValueError as exc:
        raise SortDecodeError(f"{where}: {exc}") from exc


def _iri_set(raw: Any, where: str) -> frozenset[Iri]:
    if not isinstance(raw, list):
        msg = f"{where}: expected a list"
        raise SortDecodeError(msg)
    return frozenset(_iri(item, where) for item in raw)


def _is_empty_marker(raw: dict[str, Any], where: str) -> bool:
    if "empty" not in raw:
        return False
    if raw != {"empty": True}:
        msg = f"{where}: key 'empty' must stand alone with value true"
        raise SortDecodeError(msg)
    return True


def _interval(raw: Any) -> TimeInterval:
    obj = _object(raw, "time")
    if _is_empty_marker(obj, "time"):
        return BOTTOM_INTERVAL
    _check_keys(obj, {"start", "end"}, "time")
    if not obj:
        return UNIVERSAL_INTERVAL
    try:
        start = parse_datetime(obj["start"]) if "start" in obj else None
        end = parse_datetime(obj["end"]) if "end" in obj else None
        return TimeInterval(start, end)
    except (TypeError, ValueError, SortDomainError) as exc:
        raise SortDecodeError(f"time: {exc}") from exc


def _space(raw: Any) -> SpaceRegion:
    obj = _object(raw, "space")
    if _is_empty_marker(obj, "space"):
        return BOTTOM_SPACE
    _check_keys(obj, {"region"}, "space")
    if not obj:
        return UNIVERSAL_SPACE
    return SpaceRegion(_iri(obj["region"], "space.region"))


def _validity(obj: dict[str, Any]) -> ValidityContext:
    _check_keys(obj, {"time", "space", "dimensions"}, "validity")
    dims = _object(obj.get("dimensions", {}), "validity.dimensions")
    return ValidityContext(
        _interval(obj.get("time", {})),
        _space(obj.get("space", {})),
        frozenset(
            (_iri(key, "validity.dimensions"), _iri_set(members, f"validity.dimensions.{key}"))
            for key, members in dims.items()
        ),
    )


def _causality(obj: dict[str, Any]) -> Causality:
    if obj == {"noValue": True}:
        return NO_VALUE_CAUSE
    # older writers used lower-case keys
    normalised: dict[str, Any] = {}
    for key, members in obj.items():
        canonical = {"hascause": "hasCause", "endcause": "endCause"}.get(key.lower())
        if canonical is None:
            msg = f"causality: unexpected key {key!r}"
            raise SortDecodeError(msg)
        normalised[canonical] = members
    return Causality(
        _iri_set(normalised.get("hasCause", []), "causality.hasCause"),
        _iri_set(normalised.get("endCause", []), "causality.endCause"),
    )


def _sequence(obj: dict[str, Any]) -> SequenceNode:
    _check_keys(obj, {"previous", "next", "ordinal"}, "sequence")
    ordinal = obj.get("ordinal")
    if ordinal is not None and (
        isinstance(ordinal, bool) or not isinstance(ordinal, int) or ordinal < 0
    ):
        msg = f"sequence: key 'ordinal' must be a natural number, got {ordinal!r}"
        raise SortDecodeError(msg)
    return SequenceNode(
        _iri(obj["previous"], "sequence.previous") if "previous" in obj else None,
        _iri(obj["next"], "sequence.next") if "next" in obj else None,
        ordinal,
    )


def _provenance(obj: dict[str, Any]) -> Provenance:
    _check_keys(obj, {"sources"}, "provenance")
    return Provenance(_iri_set(obj.get("sources", []), "provenance.sources"))


def _annotations(obj: dict[str, Any]) -> Annotations:
    mapping: dict[Iri, list[Any]] = {}
    for key, members in obj.items():
        if not isinstance(members, list):
            msg = f"annotations: key {key!r} must map to a list"
            raise SortDecodeError(msg)
        try:
            mapping[_iri(key, "annotations")] = [value_from_json(item) for item in members]
        except ValueError as exc:
            raise SortDecodeError(f"annotations: key {key!r}: {exc}") from exc
    return Annotations.from_mapping(mapping)


_DECODERS = {
    SortCategory.VALIDITY: _validity,
    SortCategory.CAUSALITY: _causality,
    SortCategory.SEQUENCE: _sequence,
    SortCategory.PROVENANCE: _provenance,
    SortCategory.ANNOTATION: _annotations,
}


def sort_from_json(category: SortCategory, raw: Any) -> SortValue:
    """Build a sort value of ``category`` from its JSON object.

    Raises:
        SortDecodeError: If ``raw`` does not follow the category's schema.
    """
    return _DECODERS[category](_object(raw, category.value))


def decode_sort(category: SortCategory, text: str) -> SortValue:
    """Parse canonical (or lower-case legacy) JSON text into a sort value."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SortDecodeError(f"{category.value}: invalid JSON: {exc}") from exc
    return sort_from_json(category, raw)

"""Primitive values stored in statements: IRIs, data values and special markers."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import UTC, datetime
from enum import StrEnum
from typing import TYPE_CHECKING, Any, TypeAlias

if TYPE_CHECKING:
    from collections.abc import Iterator

XSD_STRING = "xsd:string"
XSD_INTEGER = "xsd:integer"
XSD_DATE = "xsd:date"
XSD_DATETIME = "xsd:dateTime"

_TEMPORAL_DATATYPES = frozenset({XSD_DATE, XSD_DATETIME})


@dataclass(frozen=True, slots=True, order=True)
class Iri:
    """An entity or property identifier.

    ``text`` is either a prefixed name (``wd:Q76``) or a full IRI wrapped
    in angle brackets (``<http://example.org/x>``). Entities and properties
    share this class; a property is an IRI used in property position.
    """

    text: str

    def __post_init__(self) -> None:
        if not self.text or any(ch.isspace() for ch in self.text):
            msg = f"invalid IRI text: {self.text!r}"
            raise ValueError(msg)

    @property
    def is_absolute(self) -> bool:
        return self.text.startswith("<")

    @property
    def prefix(self) -> str | None:
        if self.is_absolute:
            return None
        return self.text.split(":", 1)[0]

    @property
    def local(self) -> str:
        if self.is_absolute:
            return self.text[1:-1]
        return self.text.split(":", 1)[1]

    def __str__(self) -> str:
        return self.text


class SpecialValue(StrEnum):
    """Wikibase snak markers and the undefined value."""

    NO_VALUE = "noValue"
    SOME_VALUE = "someValue"
    UNDEFINED = "undefined"


@dataclass(frozen=True, slots=True)
class DataValue:
    """A literal with datatype (prefixed) and optional language tag."""

    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    @property
    def is_temporal(self) -> bool:
        return self.datatype in _TEMPORAL_DATATYPES


Value: TypeAlias = Iri | DataValue | SpecialValue


# ---------------------------------------------------------------------------
# Date and time helpers
# ---------------------------------------------------------------------------


def parse_datetime(lexical: str) -> datetime:
    """Parse an xsd:dateTime / xsd:date lexical form into an aware UTC datetime.

    Accepts the Wikidata leading ``+`` sign and a trailing ``Z``. Fractions
    of a second are dropped.

    Raises:
        ValueError: If the text is not a supported date or date-time.
    """
    text = lexical.strip()
    if text.startswith("+"):
        text = text[1:]
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return to_second(datetime.fromisoformat(text))


def to_second(moment: datetime) -> datetime:
    """Normalise an instant to UTC at second precision; naive means UTC."""
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=UTC)
    return moment.astimezone(UTC).replace(microsecond=0)


def format_datetime(moment: datetime) -> str:
    """Render an instant in the canonical ``YYYY-MM-DDThh:mm:ssZ`` form."""
    moment = moment.astimezone(UTC)
    return (
        f"{moment.year:04d}-{moment.month:02d}-{moment.day:02d}"
        f"T{moment.hour:02d}:{moment.minute:02d}:{moment.second:02d}Z"
    )


def datetime_value(moment: datetime) -> DataValue:
    return DataValue(format_datetime(moment), XSD_DATETIME)


# ---------------------------------------------------------------------------
# JSON form (shared by the sort codec and the NDJSON store)
# ---------------------------------------------------------------------------


def value_to_json(value: Value) -> Any:
    """Encode a value as a JSON-ready object.

    IRIs become their text, data values an object with ``lexical`` and
    ``datatype`` (plus ``language`` when tagged), special markers an object
    with a single ``special`` key.
    """
    if isinstance(value, Iri):
        return value.text
    if isinstance(value, SpecialValue):
        return {"special": value.value}
    encoded: dict[str, str] = {"datatype": value.datatype, "lexical": value.lexical}
    if value.language is not None:
        encoded["language"] = value.language
    return dict(sorted(encoded.items()))


def value_from_json(raw: Any) -> Value:
    """Inverse of :func:`value_to_json`.

    Raises:
        ValueError: If ``raw`` is not a recognised value encoding.
    """
    if isinstance(raw, str):
        return Iri(raw)
    if isinstance(raw, dict):
        if set(raw) == {"special"}:
            return SpecialValue(raw["special"])
        if "lexical" in raw and set(raw) <= {"lexical", "datatype", "language"}:
            return DataValue(
                str(raw["lexical"]),
                str(raw.get("datatype", XSD_STRING)),
                raw.get("language"),
            )
    msg = f"not a value encoding: {raw!r}"
    raise ValueError(msg)


def value_sort_key(value: Value) -> str:
    """Total order over values used for canonical set rendering."""
    return json.dumps(value_to_json(value), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Qualifier bag
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class QualifierBag:
    """Ordered multiset of (qualifier, value) pairs attached to one statement."""

    pairs: tuple[tuple[Iri, Value], ...] = ()

    def add(self, qualifier: Iri, value: Value) -> QualifierBag:
        return QualifierBag((*self.pairs, (qualifier, value)))

    def values_for(self, qualifier: Iri) -> list[Value]:
        return [value for key, value in self.pairs if key == qualifier]

    def __iter__(self) -> Iterator[tuple[Iri, Value]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

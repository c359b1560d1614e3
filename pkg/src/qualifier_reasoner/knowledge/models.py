"""Statement model, statement patterns and variable bindings."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, TypeAlias

from qualifier_reasoner.exceptions import StatementValidationError
from qualifier_reasoner.sorts.annotations import EMPTY_ANNOTATIONS, Annotations
from qualifier_reasoner.sorts.causality import EMPTY_CAUSE, Causality
from qualifier_reasoner.sorts.provenance import EMPTY_PROVENANCE, Provenance
from qualifier_reasoner.sorts.sequence import EMPTY_SEQUENCE, SequenceNode
from qualifier_reasoner.sorts.validity import EMPTY_VALIDITY, ValidityContext
from qualifier_reasoner.values import DataValue, Iri, SpecialValue, Value

ASSERTED = "asserted"
_INFERRED_PREFIX = "inferred:"


def inferred_origin(rule: str) -> str:
    return f"{_INFERRED_PREFIX}{rule}"


def origin_rule(origin: str) -> str | None:
    """Rule name of an ``inferred:<rule>`` origin, ``None`` when asserted."""
    if origin.startswith(_INFERRED_PREFIX):
        return origin[len(_INFERRED_PREFIX) :]
    return None


class StatementKind(StrEnum):
    """``st`` has a value; ``sno`` (no value) and ``ssome`` (unknown value) do not."""

    ST = "st"
    SNO = "sno"
    SSOME = "ssome"

    @property
    def has_value(self) -> bool:
        return self is StatementKind.ST


# Order in which sort slots appear in atoms, records and emitted triples.
SORT_SLOTS: tuple[str, ...] = ("validity", "causality", "sequence", "annotations", "provenance")

_SORT_TYPES: dict[str, type] = {
    "validity": ValidityContext,
    "causality": Causality,
    "sequence": SequenceNode,
    "annotations": Annotations,
    "provenance": Provenance,
}


@dataclass(frozen=True, slots=True)
class Statement:
    """One many-sorted statement.

    Equality and hashing cover every component except ``origin``, so an
    inferred copy of an asserted statement is the same statement.
    """

    kind: StatementKind
    subject: Iri
    prop: Iri
    value: Value | None = None
    validity: ValidityContext = EMPTY_VALIDITY
    causality: Causality = EMPTY_CAUSE
    sequence: SequenceNode = EMPTY_SEQUENCE
    annotations: Annotations = EMPTY_ANNOTATIONS
    provenance: Provenance = EMPTY_PROVENANCE
    origin: str = field(default=ASSERTED, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.subject, Iri):
            msg = f"subject must be an entity IRI, got {self.subject!r}"
            raise StatementValidationError(msg)
        if not isinstance(self.prop, Iri):
            msg = f"property must be an IRI, got {self.prop!r}"
            raise StatementValidationError(msg)
        if self.kind.has_value:
            if self.value is None:
                msg = "kind=st requires a value"
                raise StatementValidationError(msg)
            if not isinstance(self.value, Iri | DataValue | SpecialValue):
                msg = f"value must be an IRI, data value or special marker, got {self.value!r}"
                raise StatementValidationError(msg)
        elif self.value is not None:
            msg = f"kind={self.kind.value} must not carry a value"
            raise StatementValidationError(msg)
        for slot, expected in _SORT_TYPES.items():
            if not isinstance(getattr(self, slot), expected):
                msg = f"{slot} slot must hold a {expected.__name__}"
                raise StatementValidationError(msg)

    @property
    def sorts(self) -> tuple[ValidityContext, Causality, SequenceNode, Annotations, Provenance]:
        return (self.validity, self.causality, self.sequence, self.annotations, self.provenance)

    def with_origin(self, origin: str) -> Statement:
        return Statement(
            self.kind,
            self.subject,
            self.prop,
            self.value,
            *self.sorts,
            origin=origin,
        )


def statement_equal(a: Statement, b: Statement) -> bool:
    """Structural equality over kind, triple and the five sort values.

    Sort values hold frozensets, so equality does not depend on the order
    in which set members were added.
    """
    return a == b


# ---------------------------------------------------------------------------
# Patterns and bindings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


Binding: TypeAlias = dict[str, Any]

_UNBOUND = object()

# Pattern slot order; ``value`` is skipped for sno/ssome patterns.
PATTERN_SLOTS: tuple[str, ...] = ("subject", "prop", "value", *SORT_SLOTS)


@dataclass(frozen=True, slots=True)
class StatementPattern:
    """A statement with a :class:`Variable` or a constant in every slot."""

    kind: StatementKind
    subject: Any
    prop: Any
    value: Any = None
    validity: Any = None
    causality: Any = None
    sequence: Any = None
    annotations: Any = None
    provenance: Any = None

    def slots(self) -> list[tuple[str, Any]]:
        names = PATTERN_SLOTS if self.kind.has_value else tuple(
            name for name in PATTERN_SLOTS if name != "value"
        )
        return [(name, getattr(self, name)) for name in names]

    def constant(self, slot: str, binding: Binding) -> Any | None:
        """Constant (or already bound) content of ``slot``; ``None`` if open."""
        term = getattr(self, slot)
        if isinstance(term, Variable):
            return binding.get(term.name)
        return term


def match(pattern: StatementPattern, statement: Statement, binding: Binding) -> Binding | None:
    """Unify ``statement`` with ``pattern`` extending ``binding``.

    Returns the extended binding, or ``None`` when they do not unify. A
    ``None`` constant in a sort slot is a wildcard.
    """
    if statement.kind is not pattern.kind:
        return None
    extended: Binding | None = None
    for slot, term in pattern.slots():
        actual = getattr(statement, slot)
        if isinstance(term, Variable):
            current = (binding if extended is None else extended).get(term.name, _UNBOUND)
            if current is _UNBOUND:
                if extended is None:
                    extended = dict(binding)
                extended[term.name] = actual
            elif current != actual:
                return None
        elif term is not None and term != actual:
            return None
    return dict(binding) if extended is None else extended


"""Sorted signature of the rule language.

Every function symbol usable in a rule term and every builtin predicate is
declared here with its parameter and result sorts. The typechecker reads
these tables; the engine binds the same names to implementations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from qualifier_reasoner.knowledge.models import StatementKind


class Sort(StrEnum):
    VALUE = "value"
    ENTITY = "entity"
    PROPERTY = "property"
    DATAVALUE = "datavalue"
    NAT = "nat"
    INSTANT = "instant"
    DURATION = "duration"
    INTERVAL = "interval"
    SPACE = "space"
    VALIDITY = "validity"
    CAUSALITY = "causality"
    SEQUENCE = "sequence"
    ANNOTATIONS = "annotations"
    PROVENANCE = "provenance"
    ENTITY_SET = "set[entity]"
    VALUE_SET = "set[value]"
    UNDEFINED = "undefined"
    ANY = "any"


_VALUE_FAMILY = frozenset({Sort.VALUE, Sort.ENTITY, Sort.PROPERTY, Sort.DATAVALUE})
_SETS = frozenset({Sort.ENTITY_SET, Sort.VALUE_SET})
_PARENT: dict[Sort, Sort] = {
    Sort.PROPERTY: Sort.ENTITY,
    Sort.ENTITY: Sort.VALUE,
    Sort.DATAVALUE: Sort.VALUE,
    Sort.ENTITY_SET: Sort.VALUE_SET,
}


def is_subsort(a: Sort, b: Sort) -> bool:
    """Reflexive-transitive subsort order."""
    current: Sort | None = a
    while current is not None:
        if current is b:
            return True
        current = _PARENT.get(current)
    return False


def _comparable(a: Sort, b: Sort) -> bool:
    return is_subsort(a, b) or is_subsort(b, a)


def assignable(actual: Sort, expected: Sort) -> bool:
    """Whether a term of sort ``actual`` may fill a position of sort ``expected``.

    Narrowing inside the value family (``value`` to ``entity``) and the
    coercions between data values, instants and naturals are accepted here
    and checked when the rule runs.
    """
    if Sort.ANY in (actual, expected) or actual is expected:
        return True
    if actual in _VALUE_FAMILY and expected in _VALUE_FAMILY:
        return _comparable(actual, expected)
    if actual in _SETS and expected in _SETS:
        return True
    if actual in _VALUE_FAMILY and expected in _SETS:
        # a single entity stands for its singleton set
        return actual is not Sort.DATAVALUE
    if actual in {Sort.VALUE, Sort.DATAVALUE}:
        return expected in {Sort.INSTANT, Sort.NAT}
    if actual in {Sort.INSTANT, Sort.NAT}:
        return expected in {Sort.VALUE, Sort.DATAVALUE}
    if actual is Sort.UNDEFINED:
        return expected in {Sort.INSTANT, Sort.DURATION} or expected in _VALUE_FAMILY
    return False


def meet(a: Sort, b: Sort) -> Sort | None:
    """Greatest common subsort of two variable occurrences, ``None`` on conflict."""
    if a is b or b is Sort.ANY:
        return a
    if a is Sort.ANY:
        return b
    if is_subsort(a, b):
        return a
    if is_subsort(b, a):
        return b
    return None


@dataclass(frozen=True, slots=True)
class FunctionSig:
    name: str
    params: tuple[Sort, ...]
    result: Sort

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True, slots=True)
class PredicateSig:
    name: str
    params: tuple[Sort, ...]

    @property
    def arity(self) -> int:
        return len(self.params)


def _fn(name: str, result: Sort, *params: Sort) -> FunctionSig:
    return FunctionSig(name, params, result)


_S = Sort

_FUNCTION_LIST: tuple[FunctionSig, ...] = (
    # constants
    _fn("undefined", _S.UNDEFINED),
    _fn("emptyValidity", _S.VALIDITY),
    _fn("bottomValidity", _S.VALIDITY),
    _fn("universalInterval", _S.INTERVAL),
    _fn("bottomInterval", _S.INTERVAL),
    _fn("universalSpace", _S.SPACE),
    _fn("bottomSpace", _S.SPACE),
    _fn("emptyCause", _S.CAUSALITY),
    _fn("noValueCause", _S.CAUSALITY),
    _fn("emptySequence", _S.SEQUENCE),
    _fn("emptyAnnotations", _S.ANNOTATIONS),
    _fn("emptyProvenance", _S.PROVENANCE),
    # instants and intervals
    _fn("instant", _S.INSTANT, _S.VALUE),
    _fn("interval", _S.INTERVAL, _S.INSTANT, _S.INSTANT),
    _fn("intervalFor", _S.INTERVAL, _S.INSTANT, _S.DURATION),
    _fn("startTime", _S.INSTANT, _S.INTERVAL),
    _fn("endTime", _S.INSTANT, _S.INTERVAL),
    _fn("duration", _S.DURATION, _S.INTERVAL),
    _fn("interInterval", _S.INTERVAL, _S.INTERVAL, _S.INTERVAL),
    _fn("unionInterval", _S.INTERVAL, _S.INTERVAL, _S.INTERVAL),
    # space
    _fn("region", _S.SPACE, _S.ENTITY),
    _fn("interSpace", _S.SPACE, _S.SPACE, _S.SPACE),
    _fn("unionSpace", _S.SPACE, _S.SPACE, _S.SPACE),
    # validity contexts
    _fn("timeValidity", _S.VALIDITY, _S.INTERVAL),
    _fn("spaceValidity", _S.VALIDITY, _S.SPACE),
    _fn("timespaceValidity", _S.VALIDITY, _S.INTERVAL, _S.SPACE),
    _fn("setTime", _S.VALIDITY, _S.VALIDITY, _S.INTERVAL),
    _fn("setSpace", _S.VALIDITY, _S.VALIDITY, _S.SPACE),
    _fn("extractTime", _S.INTERVAL, _S.VALIDITY),
    _fn("extractSpace", _S.SPACE, _S.VALIDITY),
    _fn("interValidity", _S.VALIDITY, _S.VALIDITY, _S.VALIDITY),
    _fn("unionValidity", _S.VALIDITY, _S.VALIDITY, _S.VALIDITY),
    # causality
    _fn("addEndCause", _S.CAUSALITY, _S.ENTITY_SET, _S.CAUSALITY),
    _fn("addHasCause", _S.CAUSALITY, _S.ENTITY_SET, _S.CAUSALITY),
    _fn("getEndCause", _S.ENTITY_SET, _S.CAUSALITY),
    _fn("getHasCause", _S.ENTITY_SET, _S.CAUSALITY),
    _fn("unionCause", _S.CAUSALITY, _S.CAUSALITY, _S.CAUSALITY),
    _fn("inverseCause", _S.CAUSALITY, _S.CAUSALITY),
    # sequence
    _fn("seq", _S.SEQUENCE, _S.ENTITY, _S.ENTITY),
    _fn("seq", _S.SEQUENCE, _S.ENTITY, _S.ENTITY, _S.NAT),
    _fn("seqWithNext", _S.SEQUENCE, _S.ENTITY),
    _fn("seqWithPrev", _S.SEQUENCE, _S.ENTITY),
    _fn("seqWithPrevious", _S.SEQUENCE, _S.ENTITY),
    _fn("seqWithOrdinal", _S.SEQUENCE, _S.NAT),
    _fn("previous", _S.ENTITY, _S.SEQUENCE),
    _fn("next", _S.ENTITY, _S.SEQUENCE),
    _fn("ordinal", _S.NAT, _S.SEQUENCE),
    _fn("natPlus", _S.NAT, _S.NAT, _S.NAT),
    _fn("natMinus", _S.NAT, _S.NAT, _S.NAT),
    # provenance
    _fn("addSources", _S.PROVENANCE, _S.ENTITY_SET, _S.PROVENANCE),
    _fn("getSources", _S.ENTITY_SET, _S.PROVENANCE),
    _fn("unionProv", _S.PROVENANCE, _S.PROVENANCE, _S.PROVENANCE),
    # annotations
    _fn("addAnnotation", _S.ANNOTATIONS, _S.ANNOTATIONS, _S.PROPERTY, _S.VALUE),
    _fn("getAnnotation", _S.VALUE_SET, _S.ANNOTATIONS, _S.PROPERTY),
    _fn("getRelation", _S.VALUE_SET, _S.ANNOTATIONS),
    _fn("getClass", _S.VALUE_SET, _S.ANNOTATIONS),
    _fn("single", _S.VALUE, _S.VALUE_SET),
    _fn("relationProperty", _S.PROPERTY, _S.VALUE_SET),
)

FUNCTIONS: dict[str, dict[int, FunctionSig]] = {}
for _sig in _FUNCTION_LIST:
    FUNCTIONS.setdefault(_sig.name, {})[_sig.arity] = _sig

PREDICATES: dict[str, PredicateSig] = {
    sig.name: sig
    for sig in (
        PredicateSig("testIntersectValidity", (_S.VALIDITY, _S.VALIDITY)),
        PredicateSig("testIntersectInterval", (_S.INTERVAL, _S.INTERVAL)),
        PredicateSig("testIntersectSpace", (_S.SPACE, _S.SPACE)),
        PredicateSig("disjoint", (_S.INTERVAL, _S.INTERVAL)),
        PredicateSig("inside", (_S.ANY, _S.ANY)),
        PredicateSig("incl", (_S.ANY, _S.ANY)),
        PredicateSig("equal", (_S.ANY, _S.ANY)),
        PredicateSig("contains", (_S.VALUE_SET, _S.VALUE)),
        PredicateSig("hasPrevious", (_S.SEQUENCE,)),
        PredicateSig("hasNext", (_S.SEQUENCE,)),
        PredicateSig("hasOrdinal", (_S.SEQUENCE,)),
    )
}

STATEMENT_KINDS: dict[str, StatementKind] = {kind.value: kind for kind in StatementKind}

# Slot sorts of st atoms; sno/ssome drop the value slot.
_ST_SLOTS: tuple[Sort, ...] = (
    _S.ENTITY,
    _S.PROPERTY,
    _S.VALUE,
    _S.VALIDITY,
    _S.CAUSALITY,
    _S.SEQUENCE,
    _S.ANNOTATIONS,
    _S.PROVENANCE,
)


def statement_slot_sorts(kind: StatementKind) -> tuple[Sort, ...]:
    if kind.has_value:
        return _ST_SLOTS
    return _ST_SLOTS[:2] + _ST_SLOTS[3:]

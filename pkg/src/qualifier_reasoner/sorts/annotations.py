"""Annotations sort: every qualifier without a dedicated sort.

One keyed multimap replaces a family of per-qualifier add/get operations;
``add_annotation(a, q, v)`` plays the role of ``addA_q(a, v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from qualifier_reasoner.values import Iri, Value

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

CLASS_PROPERTY = Iri("wd:P2308")
RELATION_PROPERTY = Iri("wd:P2309")

# Constraint relation sentinels (distinct from P31 / P279 themselves).
INSTANCE_OF_RELATION = Iri("wd:Q21503252")
SUBCLASS_OF_RELATION = Iri("wd:Q21514624")
RELATION_PROPERTIES: dict[Iri, Iri] = {
    INSTANCE_OF_RELATION: Iri("wd:P31"),
    SUBCLASS_OF_RELATION: Iri("wd:P279"),
}


@dataclass(frozen=True, slots=True)
class Annotations:
    """Mapping qualifier -> non-empty set of values."""

    attrs: frozenset[tuple[Iri, frozenset[Value]]] = field(default_factory=frozenset)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Iri, Iterable[Value]]) -> Annotations:
        return cls(
            frozenset(
                (key, frozenset(values))
                for key, values in mapping.items()
                if frozenset(values)
            )
        )

    def as_dict(self) -> dict[Iri, frozenset[Value]]:
        return dict(self.attrs)

    @property
    def is_empty(self) -> bool:
        return not self.attrs

    def __len__(self) -> int:
        return sum(len(values) for _, values in self.attrs)


EMPTY_ANNOTATIONS = Annotations()


def add_annotation(a: Annotations, qualifier: Iri, value: Value) -> Annotations:
    mapping = a.as_dict()
    mapping[qualifier] = mapping.get(qualifier, frozenset()) | {value}
    return Annotations.from_mapping(mapping)


def get_annotation(a: Annotations, qualifier: Iri) -> frozenset[Value]:
    return a.as_dict().get(qualifier, frozenset())


def get_relation(a: Annotations) -> frozenset[Value]:
    return get_annotation(a, RELATION_PROPERTY)


def get_class(a: Annotations) -> frozenset[Value]:
    return get_annotation(a, CLASS_PROPERTY)

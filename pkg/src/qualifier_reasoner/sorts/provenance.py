"""Provenance sort: the set of sources a statement was derived from."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from qualifier_reasoner.values import Iri

if TYPE_CHECKING:
    from collections.abc import Iterable


@dataclass(frozen=True, slots=True)
class Provenance:
    sources: frozenset[Iri] = field(default_factory=frozenset)

    @property
    def is_empty(self) -> bool:
        return not self.sources


EMPTY_PROVENANCE = Provenance()


def add_sources(sources: Iri | Iterable[Iri], p: Provenance) -> Provenance:
    added = frozenset((sources,)) if isinstance(sources, Iri) else frozenset(sources)
    return Provenance(p.sources | added)


def get_sources(p: Provenance) -> frozenset[Iri]:
    return p.sources


def union_prov(a: Provenance, b: Provenance) -> Provenance:
    return Provenance(a.sources | b.sources)

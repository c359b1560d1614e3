"""Sequence sort: predecessor, successor and ordinal of a statement."""

from __future__ import annotations

from dataclasses import dataclass

from qualifier_reasoner.exceptions import SortDomainError
from qualifier_reasoner.values import Iri


@dataclass(frozen=True, slots=True)
class SequenceNode:
    previous: Iri | None = None
    next: Iri | None = None
    ordinal: int | None = None

    def __post_init__(self) -> None:
        if self.ordinal is not None and self.ordinal < 0:
            msg = f"ordinal must be a natural number, got {self.ordinal}"
            raise SortDomainError(msg)

    @property
    def is_empty(self) -> bool:
        return self == EMPTY_SEQUENCE


EMPTY_SEQUENCE = SequenceNode()


def seq(previous: Iri, next_: Iri, ordinal: int | None = None) -> SequenceNode:
    return SequenceNode(previous, next_, ordinal)


def seq_with_next(next_: Iri) -> SequenceNode:
    return SequenceNode(next=next_)


def seq_with_prev(previous: Iri) -> SequenceNode:
    return SequenceNode(previous=previous)


def seq_with_ordinal(ordinal: int) -> SequenceNode:
    return SequenceNode(ordinal=ordinal)


def has_previous(s: SequenceNode) -> bool:
    return s.previous is not None


def has_next(s: SequenceNode) -> bool:
    return s.next is not None


def has_ordinal(s: SequenceNode) -> bool:
    return s.ordinal is not None


def previous(s: SequenceNode) -> Iri | None:
    """Predecessor, or ``None`` (undefined) when absent."""
    return s.previous


def next_(s: SequenceNode) -> Iri | None:
    return s.next


def ordinal(s: SequenceNode) -> int:
    if s.ordinal is None:
        msg = "sequence node has no ordinal"
        raise SortDomainError(msg)
    return s.ordinal


def nat_plus(a: int, b: int) -> int:
    return a + b


def nat_minus(a: int, b: int) -> int:
    """Truncated subtraction on naturals."""
    return max(a - b, 0)

"""Sort algebras (validity, causality, sequence, provenance, annotations),
qualifier categorization, sort building and the canonical codec."""

from qualifier_reasoner.sorts.annotations import EMPTY_ANNOTATIONS, Annotations
from qualifier_reasoner.sorts.builder import BuiltSorts, build_sorts
from qualifier_reasoner.sorts.categories import (
    DEFAULT_CATEGORY_MAP,
    Category,
    CategoryMap,
    QualifierRole,
    SortCategory,
    categorize,
)
from qualifier_reasoner.sorts.causality import EMPTY_CAUSE, Causality, InverseCauseMap
from qualifier_reasoner.sorts.codec import SortValue, decode_sort, encode_sort
from qualifier_reasoner.sorts.provenance import EMPTY_PROVENANCE, Provenance
from qualifier_reasoner.sorts.sequence import EMPTY_SEQUENCE, SequenceNode
from qualifier_reasoner.sorts.validity import (
    EMPTY_CONTAINMENT,
    EMPTY_VALIDITY,
    ContainmentTable,
    SpaceRegion,
    TimeInterval,
    ValidityContext,
)

__all__ = [
    "DEFAULT_CATEGORY_MAP",
    "EMPTY_ANNOTATIONS",
    "EMPTY_CAUSE",
    "EMPTY_CONTAINMENT",
    "EMPTY_PROVENANCE",
    "EMPTY_SEQUENCE",
    "EMPTY_VALIDITY",
    "Annotations",
    "BuiltSorts",
    "Category",
    "CategoryMap",
    "Causality",
    "ContainmentTable",
    "InverseCauseMap",
    "Provenance",
    "QualifierRole",
    "SequenceNode",
    "SortCategory",
    "SortValue",
    "SpaceRegion",
    "TimeInterval",
    "ValidityContext",
    "build_sorts",
    "categorize",
    "decode_sort",
    "encode_sort",
]

"""Qualifier categorization: which sort, and which slot in it, a qualifier feeds."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.values import Iri

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

    from qualifier_reasoner.prefixes import PrefixTable

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)


class SortCategory(StrEnum):
    VALIDITY = "validity"
    CAUSALITY = "causality"
    SEQUENCE = "sequence"
    PROVENANCE = "provenance"
    ANNOTATION = "annotation"


class QualifierRole(StrEnum):
    TIME_START = "timeStart"
    TIME_END = "timeEnd"
    POINT_IN_TIME = "pointInTime"
    SPACE = "space"
    DIMENSION = "dimension"
    CAUSE_HAS = "causeHas"
    CAUSE_END = "causeEnd"
    SEQ_PREV = "seqPrev"
    SEQ_NEXT = "seqNext"
    SEQ_ORDINAL = "seqOrdinal"
    SOURCE = "source"
    GENERIC = "generic"


_LEGAL_ROLES: dict[SortCategory, frozenset[QualifierRole]] = {
    SortCategory.VALIDITY: frozenset(
        {
            QualifierRole.TIME_START,
            QualifierRole.TIME_END,
            QualifierRole.POINT_IN_TIME,
            QualifierRole.SPACE,
            QualifierRole.DIMENSION,
        }
    ),
    SortCategory.CAUSALITY: frozenset({QualifierRole.CAUSE_HAS, QualifierRole.CAUSE_END}),
    SortCategory.SEQUENCE: frozenset(
        {QualifierRole.SEQ_PREV, QualifierRole.SEQ_NEXT, QualifierRole.SEQ_ORDINAL}
    ),
    SortCategory.PROVENANCE: frozenset({QualifierRole.SOURCE}),
    SortCategory.ANNOTATION: frozenset({QualifierRole.GENERIC}),
}


@dataclass(frozen=True, slots=True)
class Category:
    category: SortCategory
    role: QualifierRole

    def __post_init__(self) -> None:
        if self.role not in _LEGAL_ROLES[self.category]:
            msg = f"role {self.role.value!r} is not legal for category {self.category.value!r}"
            raise ValueError(msg)


GENERIC_ANNOTATION = Category(SortCategory.ANNOTATION, QualifierRole.GENERIC)


def _entry(category: SortCategory, role: QualifierRole, *properties: str) -> dict[Iri, Category]:
    return {Iri(prop): Category(category, role) for prop in properties}


BUILTIN_CATEGORIES: dict[Iri, Category] = {
    **_entry(SortCategory.VALIDITY, QualifierRole.TIME_START, "wd:P580"),
    **_entry(SortCategory.VALIDITY, QualifierRole.TIME_END, "wd:P582"),
    **_entry(SortCategory.VALIDITY, QualifierRole.POINT_IN_TIME, "wd:P585"),
    **_entry(SortCategory.VALIDITY, QualifierRole.SPACE, "wd:P1001"),
    **_entry(SortCategory.CAUSALITY, QualifierRole.CAUSE_HAS, "wd:P828"),
    **_entry(SortCategory.CAUSALITY, QualifierRole.CAUSE_END, "wd:P1534"),
    **_entry(SortCategory.SEQUENCE, QualifierRole.SEQ_PREV, "wd:P1365", "wd:P155"),
    **_entry(SortCategory.SEQUENCE, QualifierRole.SEQ_NEXT, "wd:P1366", "wd:P156"),
    **_entry(SortCategory.SEQUENCE, QualifierRole.SEQ_ORDINAL, "wd:P1545"),
    **_entry(
        SortCategory.PROVENANCE,
        QualifierRole.SOURCE,
        "wd:P1932",
        "wd:P459",
        "wd:P1810",
        "wd:P1013",
        "wd:P1480",
        "prov:wasDerivedFrom",
    ),
}

# Kept as annotations but reported: they qualify validity in ways the
# time x space context cannot hold (part, period, uncertain bounds).
UNSLOTTED_QUALIFIERS: frozenset[Iri] = frozenset(
    Iri(prop) for prop in ("wd:P518", "wd:P1264", "wd:P1319", "wd:P1326")
)


class CategoryMap:
    """Lookup table from qualifier property to :class:`Category`.

    Unmapped qualifiers fall back to a generic annotation.
    """

    def __init__(self, entries: Mapping[Iri, Category] | None = None) -> None:
        self._entries: dict[Iri, Category] = dict(
            BUILTIN_CATEGORIES if entries is None else entries
        )

    def categorize(self, qualifier: Iri) -> Category:
        return self._entries.get(qualifier, GENERIC_ANNOTATION)

    def with_overrides(self, overrides: Mapping[Iri, Category | None]) -> CategoryMap:
        """Return a copy; a ``None`` override removes the built-in entry."""
        merged = dict(self._entries)
        for qualifier, category in overrides.items():
            if category is None:
                merged.pop(qualifier, None)
            else:
                merged[qualifier] = category
        return CategoryMap(merged)

    def __len__(self) -> int:
        return len(self._entries)

    def load_csv(self, path: Path, prefixes: PrefixTable) -> CategoryMap:
        """Apply ``property,category,role`` rows from ``path`` as overrides.

        Raises:
            ValueError: If a row names an unknown category or an illegal role.
        """
        overrides: dict[Iri, Category | None] = {}
        with path.open(encoding="utf-8", newline="") as handle:
            for line_no, row in enumerate(csv.DictReader(handle), start=2):
                try:
                    category = Category(
                        SortCategory(row["category"].strip()),
                        QualifierRole(row["role"].strip()),
                    )
                except ValueError as exc:
                    msg = f"{path}:{line_no}: {exc}"
                    raise ValueError(msg) from exc
                overrides[prefixes.iri(row["property"].strip())] = category
        logger.info("category_map_loaded", path=str(path), overrides=len(overrides))
        return self.with_overrides(overrides)


DEFAULT_CATEGORY_MAP = CategoryMap()


def categorize(qualifier: Iri, category_map: CategoryMap = DEFAULT_CATEGORY_MAP) -> Category:
    return category_map.categorize(qualifier)

"""Prefix table used to expand and normalise prefixed names."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from qualifier_reasoner.exceptions import PrefixError
from qualifier_reasoner.values import Iri

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

WIKIDATA_ENTITY = "http://www.wikidata.org/entity/"

BUILTIN_PREFIXES: dict[str, str] = {
    "wd": WIKIDATA_ENTITY,
    "wds": "http://www.wikidata.org/entity/statement/",
    "wdref": "http://www.wikidata.org/reference/",
    "wdno": "http://www.wikidata.org/prop/novalue/",
    "p": "http://www.wikidata.org/prop/",
    "ps": "http://www.wikidata.org/prop/statement/",
    "pq": "http://www.wikidata.org/prop/qualifier/",
    "wdt": "http://www.wikidata.org/prop/direct/",
    "wikibase": "http://wikiba.se/ontology#",
    "prov": "http://www.w3.org/ns/prov#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "qr": "urn:qualifier-reasoner:",
    "": WIKIDATA_ENTITY,
}

_LOCAL_RE = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$")


class PrefixTable:
    """Ordered mapping from prefix names to namespace bases.

    Normalisation expands a name and compacts it again with the longest
    matching base, preferring named prefixes over the empty one, so
    ``:P26`` and ``wd:P26`` denote the same :class:`Iri`.
    """

    def __init__(self, mapping: Mapping[str, str] | None = None) -> None:
        self._bases: dict[str, str] = dict(
            BUILTIN_PREFIXES if mapping is None else mapping
        )

    def with_prefixes(self, extra: Mapping[str, str]) -> PrefixTable:
        merged = dict(self._bases)
        merged.update(extra)
        return PrefixTable(merged)

    def __contains__(self, name: object) -> bool:
        return name in self._bases

    def __iter__(self) -> Iterator[str]:
        return iter(self._bases)

    def base(self, name: str) -> str:
        try:
            return self._bases[name]
        except KeyError:
            msg = f"undeclared prefix {name!r}"
            raise PrefixError(msg) from None

    def declarations(self) -> list[tuple[str, str]]:
        """Named prefixes in declaration order (the empty prefix excluded)."""
        return [(name, base) for name, base in self._bases.items() if name]

    def expand(self, text: str) -> str:
        """Return the full IRI for a prefixed name or ``<...>`` form.

        Raises:
            PrefixError: If the prefix is not declared or the text is not a name.
        """
        if text.startswith("<") and text.endswith(">"):
            return text[1:-1]
        if ":" not in text:
            msg = f"not a prefixed name: {text!r}"
            raise PrefixError(msg)
        prefix, local = text.split(":", 1)
        return self.base(prefix) + local

    def compact(self, full: str) -> str:
        """Return the preferred prefixed form of ``full`` or ``<full>``."""
        candidates: list[tuple[int, int, int, str, str]] = []
        for order, (name, base) in enumerate(self._bases.items()):
            local = full[len(base) :]
            if full.startswith(base) and _LOCAL_RE.match(local):
                # longest base first, then named over empty, then declaration order
                candidates.append((-len(base), 0 if name else 1, order, name, local))
        if not candidates:
            return f"<{full}>"
        *_, name, local = min(candidates)
        return f"{name}:{local}"

    def normalize(self, text: str) -> str:
        return self.compact(self.expand(text))

    def iri(self, text: str) -> Iri:
        """Build a normalised :class:`Iri` from a prefixed name or full form."""
        return Iri(self.normalize(text))

    def iri_from_full(self, full: str) -> Iri:
        return Iri(self.compact(full))

    def check(self, iri: Iri) -> None:
        """Raise :class:`PrefixError` if ``iri`` uses an undeclared prefix."""
        if iri.prefix is not None:
            self.base(iri.prefix)


DEFAULT_PREFIXES = PrefixTable()

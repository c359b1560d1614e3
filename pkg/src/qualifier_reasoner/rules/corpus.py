"""Built-in rule corpus shipped as ``.rules`` files under ``builtin/``."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.exceptions import RuleLookupError
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES
from qualifier_reasoner.rules.parser import parse_rule

if TYPE_CHECKING:
    from collections.abc import Iterable

    from qualifier_reasoner.rules.ast import Rule

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

BUILTIN_DIR = Path(__file__).parent / "builtin"


@dataclass(frozen=True, slots=True)
class CorpusEntry:
    """A built-in rule: name, where it comes from and its source text."""

    name: str
    origin: str

    @property
    def path(self) -> Path:
        return BUILTIN_DIR / f"{self.name}.rules"

    @property
    def source(self) -> str:
        return self.path.read_text(encoding="utf-8")


# Declaration order is the order rules fire within a round.
BUILTIN_RULES: tuple[CorpusEntry, ...] = (
    CorpusEntry("instance_of", "rdfs9 over instance of / subclass of"),
    CorpusEntry("subclass_of", "rdfs11 transitivity of subclass of"),
    CorpusEntry("subproperty_of_transitive", "rdfs5 transitivity of subproperty of"),
    CorpusEntry("subproperty_of_inheritance", "rdfs7 subproperty inheritance"),
    CorpusEntry("symmetry", "symmetric constraint"),
    CorpusEntry("inverse_property", "inverse property"),
    CorpusEntry("different_from", "symmetry of different from"),
    CorpusEntry("sequence_previous", "replaces / follows"),
    CorpusEntry("sequence_next", "replaced by / followed by"),
    CorpusEntry("spouse_death", "marriage ended by death of a spouse"),
    CorpusEntry("subject_type_constraint", "subject type constraint, single class"),
    CorpusEntry("value_type_constraint", "value type constraint, single class"),
)

_BY_NAME: dict[str, CorpusEntry] = {entry.name: entry for entry in BUILTIN_RULES}


def builtin_names() -> list[str]:
    return [entry.name for entry in BUILTIN_RULES]


@functools.cache
def _load(name: str) -> Rule:
    entry = _BY_NAME[name]
    return parse_rule(entry.source, DEFAULT_PREFIXES)


def load_builtin_rules(selector: Iterable[str] | None = None) -> list[Rule]:
    """Parsed, typechecked built-in rules in declaration order.

    Args:
        selector: Rule names to load; ``None`` loads all of them. The
            string ``"all"`` inside the selector also selects everything.

    Returns:
        The selected rules, in corpus order regardless of selector order.

    Raises:
        RuleLookupError: If a selected name is not a built-in rule.
    """
    if selector is None:
        wanted = set(_BY_NAME)
    else:
        wanted = set(selector)
        if "all" in wanted:
            wanted = set(_BY_NAME)
        unknown = sorted(wanted - _BY_NAME.keys())
        if unknown:
            msg = f"unknown built-in rule(s): {', '.join(unknown)}; known: {', '.join(builtin_names())}"
            raise RuleLookupError(msg)

    rules = [_load(entry.name) for entry in BUILTIN_RULES if entry.name in wanted]
    logger.debug("builtin_rules_loaded", count=len(rules))
    return rules

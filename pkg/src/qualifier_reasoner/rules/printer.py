"""Render rules back to rule-file text.

Output re-parses to an equal AST (positions aside).
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from qualifier_reasoner.prefixes import BUILTIN_PREFIXES
from qualifier_reasoner.rules.ast import (
    Apply,
    Atom,
    BuiltinAtom,
    IriConst,
    Literal,
    Rule,
    StatementAtom,
    Term,
    Var,
)
from qualifier_reasoner.values import XSD_STRING

if TYPE_CHECKING:
    from collections.abc import Iterable

    from qualifier_reasoner.prefixes import PrefixTable

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


def print_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, IriConst):
        return term.iri.text
    if isinstance(term, Literal):
        value = term.value
        if isinstance(value, int):
            return str(value)
        if value.language is not None:
            return f"{_quote(value.lexical)}@{value.language}"
        if value.datatype == XSD_STRING:
            return _quote(value.lexical)
        return f"{_quote(value.lexical)}^^{value.datatype}"
    return _print_apply(term)


def _print_apply(term: Apply) -> str:
    if not term.args:
        return term.fn
    return f"{term.fn}({', '.join(print_term(arg) for arg in term.args)})"


def print_atom(atom: Atom) -> str:
    if isinstance(atom, StatementAtom):
        name, args = atom.kind.value, atom.terms
    else:
        assert isinstance(atom, BuiltinAtom)
        name, args = atom.name, atom.args
    return f"{name}({', '.join(print_term(arg) for arg in args)})"


def print_rule(rule: Rule) -> str:
    lines = [f"rule {rule.name}:"]
    lines.extend(print_atom(atom) for atom in rule.body)
    lines.append("->")
    lines.append(print_atom(rule.head))
    return "\n".join(lines) + "\n"


def print_rules(rules: Iterable[Rule], prefixes: PrefixTable | None = None) -> str:
    """Print several rules separated by blank lines.

    Prefixes of ``prefixes`` that are not built in are declared first so
    the output stands on its own.
    """
    header = ""
    if prefixes is not None:
        header = "".join(
            f"@prefix {name}: <{base}> .\n"
            for name, base in prefixes.declarations()
            if BUILTIN_PREFIXES.get(name) != base
        )
        header += "\n" if header else ""
    return header + "\n".join(print_rule(rule) for rule in rules)

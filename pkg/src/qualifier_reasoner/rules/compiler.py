"""Compile rules to SPARQL CONSTRUCT queries over the sort-triple layout.

Statements are matched as ``?s p:Pn ?node . ?node ps:Pn ?v ; pq:validityJ ...``
nodes whose sort literals hold canonical JSON. Sort functions become calls
in the ``kgq:`` extension namespace; builtin predicates become FILTERs and
head function terms become BINDs. Variable naming is positional, so the
same rule always compiles to the same text.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import structlog

from qualifier_reasoner.engine.evaluate import EvaluationContext, eval_term
from qualifier_reasoner.exceptions import (
    CompileError,
    EvaluationError,
    PrefixError,
    SortError,
)
from qualifier_reasoner.knowledge.emit import (
    SORT_PREDICATES,
    property_local,
    quote_double,
    quote_single,
)
from qualifier_reasoner.knowledge.models import SORT_SLOTS, StatementKind
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.rules.ast import (
    Apply,
    BuiltinAtom,
    IriConst,
    Literal,
    Rule,
    StatementAtom,
    Term,
    Var,
    is_ground,
)
from qualifier_reasoner.sorts.codec import encode_sort
from qualifier_reasoner.values import XSD_STRING, Iri

if TYPE_CHECKING:
    from pathlib import Path

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

KGQ_NAMESPACE = "urn:qualifier-reasoner:fn#"

_ALWAYS_DECLARED = frozenset({"kgq", "p", "pq", "ps", "wd"})
_INDENT = "  "
_SORT_SLOT_SET = frozenset(SORT_SLOTS)


def _prop_from_wd(expr: str, namespace: str) -> str:
    return f"IRI(CONCAT(STR({namespace}:), STRAFTER(STR({expr}), STR(wd:))))"


class _QueryBuilder:
    def __init__(self, rule: Rule, prefixes: PrefixTable) -> None:
        self.rule = rule
        self.prefixes = prefixes
        self.context = EvaluationContext(prefixes=prefixes)
        self.used: set[str] = set(_ALWAYS_DECLARED)
        self.bound: set[str] = set()

    # -- rendering ----------------------------------------------------------

    def iri(self, iri: Iri) -> str:
        if iri.prefix is not None:
            try:
                self.prefixes.base(iri.prefix)
            except PrefixError as exc:
                raise CompileError(str(exc)) from exc
            self.used.add(iri.prefix)
        return iri.text

    def literal(self, term: Literal) -> str:
        value = term.value
        if isinstance(value, int):
            return str(value)
        quoted = quote_double(value.lexical)
        if value.language is not None:
            return f"{quoted}@{value.language}"
        if value.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^{self.iri(Iri(value.datatype))}"

    def expr(self, term: Term) -> str:
        """SPARQL expression for a term used inside FILTER or BIND."""
        if isinstance(term, Var):
            return f"?{term.name}"
        if isinstance(term, IriConst):
            return self.iri(term.iri)
        if isinstance(term, Literal):
            return self.literal(term)
        args = ", ".join(self.expr(arg) for arg in term.args)
        return f"kgq:{term.fn}({args})"

    def sort_literal(self, term: Term) -> str:
        try:
            value = eval_term(term, {}, self.context)
            return quote_single(encode_sort(value))
        except (EvaluationError, SortError, TypeError) as exc:
            msg = f"rule {self.rule.name}: cannot evaluate constant {self.expr(term)}: {exc}"
            raise CompileError(msg) from exc

    def property_name(self, iri: Iri) -> str:
        try:
            local = property_local(iri, self.prefixes)
        except PrefixError as exc:
            raise CompileError(str(exc)) from exc
        if local is None:
            msg = f"rule {self.rule.name}: {iri.text} is not a Wikidata property"
            raise CompileError(msg)
        return local

    # -- body ---------------------------------------------------------------

    def slot_term(self, term: Term, slot: str, index: int, filters: list[str]) -> str:
        if isinstance(term, Var):
            return f"?{term.name}"
        if isinstance(term, IriConst):
            return self.iri(term.iri)
        if isinstance(term, Literal):
            return self.literal(term)
        if slot in _SORT_SLOT_SET and is_ground(term):
            return self.sort_literal(term)
        fresh = f"?_b{index}_{slot}"
        filters.append(f"FILTER({fresh} = {self.expr(term)})")
        return fresh

    def body_atom(self, atom: StatementAtom, index: int) -> list[str]:
        slots = dict(atom.slots())
        lines: list[str] = []
        filters: list[str] = []
        node = f"?_st{index}"
        subject = self.slot_term(slots["subject"], "subject", index, filters)
        prop = slots["prop"]

        if isinstance(prop, IriConst):
            local = self.property_name(prop.iri)
            p_term, ps_term, no_term = f"p:{local}", f"ps:{local}", f"wdno:{local}"
        else:
            if atom.kind is not StatementKind.ST:
                msg = f"rule {self.rule.name}: {atom.kind.value} atoms need a constant property"
                raise CompileError(msg)
            p_term, ps_term, no_term = f"?_p{index}", f"?_ps{index}", ""
            if isinstance(prop, Var) and prop.name not in self.bound:
                filters.append(
                    f"FILTER(STRSTARTS(STR({p_term}), STR(p:)) && "
                    f'REGEX(STRAFTER(STR({p_term}), STR(p:)), "^P[0-9]+$"))'
                )
                filters.append(
                    f"FILTER({ps_term} = IRI(CONCAT(STR(ps:), STRAFTER(STR({p_term}), STR(p:)))))"
                )
                filters.append(
                    f"BIND(IRI(CONCAT(STR(wd:), STRAFTER(STR({p_term}), STR(p:)))) "
                    f"AS ?{prop.name})"
                )
            else:
                source = self.expr(prop)
                lines.append(f"BIND({_prop_from_wd(source, 'p')} AS {p_term})")
                lines.append(f"BIND({_prop_from_wd(source, 'ps')} AS {ps_term})")

        lines.append(f"{subject} {p_term} {node} .")
        if atom.kind is StatementKind.SNO:
            self.used.add("wdno")
            main = f"a {no_term}"
        elif atom.kind is StatementKind.SSOME:
            value = f"?_v{index}"
            main = f"{ps_term} {value}"
            filters.append(f"FILTER(isBlank({value}))")
        else:
            value_term = slots["value"]
            value = self.slot_term(value_term, "value", index, filters)
            main = f"{ps_term} {value}"
            if isinstance(value_term, Var):
                filters.append(f"FILTER(!isBlank({value}))")
        lines.append(f"{node} {main} ;")
        for slot, predicate in zip(SORT_SLOTS, SORT_PREDICATES, strict=True):
            end = " ." if slot == SORT_SLOTS[-1] else " ;"
            rendered = self.slot_term(slots[slot], slot, index, filters)
            lines.append(f"{_INDENT}{predicate} {rendered}{end}")

        # the BIND introducing a property variable stays last
        lines.extend(sorted(filters, key=lambda line: line.startswith("BIND(")))
        self.bound.update(atom.variables())
        return lines

    def where(self) -> list[str]:
        lines: list[str] = []
        index = 0
        for atom in self.rule.body:
            if isinstance(atom, BuiltinAtom):
                args = ", ".join(self.expr(arg) for arg in atom.args)
                lines.append(f"FILTER(kgq:{atom.name}({args}))")
            else:
                index += 1
                lines.extend(self.body_atom(atom, index))
        return lines

    # -- head ---------------------------------------------------------------

    def head(self) -> tuple[list[str], list[str]]:
        head = self.rule.head
        if head.kind is not StatementKind.ST:
            msg = f"rule {self.rule.name}: {head.kind.value} heads are not supported"
            raise CompileError(msg)
        slots = dict(head.slots())
        binds: list[str] = []

        def render(slot: str) -> str:
            term = slots[slot]
            if isinstance(term, Var):
                return f"?{term.name}"
            if isinstance(term, IriConst):
                return self.iri(term.iri)
            if isinstance(term, Literal):
                return self.literal(term)
            if slot in _SORT_SLOT_SET and is_ground(term):
                return self.sort_literal(term)
            binds.append(f"BIND({self.expr(term)} AS ?_h_{slot})")
            return f"?_h_{slot}"

        subject = render("subject")
        prop = slots["prop"]
        if isinstance(prop, IriConst):
            local = self.property_name(prop.iri)
            p_term, ps_term = f"p:{local}", f"ps:{local}"
        else:
            source = self.expr(prop)
            p_term, ps_term = "?_h_p", "?_h_ps"
            binds.append(f"BIND({_prop_from_wd(source, 'p')} AS {p_term})")
            binds.append(f"BIND({_prop_from_wd(source, 'ps')} AS {ps_term})")
        value = render("value")
        template = [f"{subject} {p_term} _:s .", f"_:s {ps_term} {value} ;"]
        for slot, predicate in zip(SORT_SLOTS, SORT_PREDICATES, strict=True):
            end = " ." if slot == SORT_SLOTS[-1] else " ;"
            template.append(f"{_INDENT}{predicate} {render(slot)}{end}")
        return template, binds

    def build(self) -> str:
        template, binds = self.head()
        where = self.where() + binds
        prefix_lines = [
            f"PREFIX {name}: <{KGQ_NAMESPACE if name == 'kgq' else self.prefixes.base(name)}>"
            for name in sorted(self.used)
        ]
        parts = [
            *prefix_lines,
            "",
            f"# rule {self.rule.name}",
            "CONSTRUCT {",
            *(f"{_INDENT}{line}" for line in template),
            "}",
            "WHERE {",
            *(f"{_INDENT}{line}" for line in where),
            "}",
        ]
        return "\n".join(parts) + "\n"


def compile_to_construct(rule: Rule, prefixes: PrefixTable = DEFAULT_PREFIXES) -> str:
    """Return the CONSTRUCT query text for ``rule``.

    Raises:
        CompileError: For sno/ssome heads, non-Wikidata constant properties,
            sno/ssome body atoms with a variable property, or sort constants
            that cannot be evaluated.
    """
    return _QueryBuilder(rule, prefixes).build()


def write_queries(
    rules: list[Rule], out_dir: Path, prefixes: PrefixTable = DEFAULT_PREFIXES
) -> list[Path]:
    """Compile each rule to ``<out_dir>/<rule name>.rq``; return the paths written.

    Raises:
        CompileError: See :func:`compile_to_construct`.
        OSError: If a file cannot be written.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for rule in rules:
        path = out_dir / f"{rule.name}.rq"
        path.write_text(compile_to_construct(rule, prefixes), encoding="utf-8")
        written.append(path)
        logger.info("query_written", rule=rule.name, path=str(path))
    return written


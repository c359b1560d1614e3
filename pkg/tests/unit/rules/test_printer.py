"""Unit tests for qualifier_reasoner.rules.printer."""

from __future__ import annotations

import pytest

from qualifier_reasoner.prefixes import DEFAULT_PREFIXES
from qualifier_reasoner.rules.ast import Apply, IriConst, Literal, Var
from qualifier_reasoner.rules.corpus import builtin_names, load_builtin_rules
from qualifier_reasoner.rules.parser import parse_rule, parse_rules
from qualifier_reasoner.rules.printer import print_rule, print_rules, print_term
from qualifier_reasoner.values import XSD_INTEGER, DataValue, Iri


class TestPrintTerm:
    """Rendering of single terms."""

    @pytest.mark.parametrize(
        ("term", "text"),
        [
            (Var("X1"), "X1"),
            (IriConst(Iri("wd:P26")), "wd:P26"),
            (Literal(44), "44"),
            (Literal(DataValue("Paris", language="fr")), '"Paris"@fr'),
            (Literal(DataValue('say "hi"')), '"say \\"hi\\""'),
            (Literal(DataValue("44", XSD_INTEGER)), '"44"^^xsd:integer'),
            (Apply("emptyCause"), "emptyCause"),
            (Apply("unionProv", (Var("P1"), Var("P2"))), "unionProv(P1, P2)"),
        ],
    )
    def test_term(self, term: object, text: str) -> None:
        assert print_term(term) == text  # type: ignore[arg-type]


class TestPrintRule:
    """Printed rules re-parse to equal ASTs."""

    @pytest.mark.parametrize("name", builtin_names())
    def test_builtin_rule_reparses(self, name: str) -> None:
        (rule,) = load_builtin_rules({name})
        assert parse_rule(print_rule(rule)) == rule

    def test_layout(self) -> None:
        rule = parse_rule(
            "rule swap:\nst(X, :P26, Y, V1, C1, S1, A1, P1)\n->\n"
            "st(Y, :P26, X, V1, C1, S1, A1, P1)\n"
        )
        assert print_rule(rule) == (
            "rule swap:\n"
            "st(X, wd:P26, Y, V1, C1, S1, A1, P1)\n"
            "->\n"
            "st(Y, wd:P26, X, V1, C1, S1, A1, P1)\n"
        )

    def test_print_rules_reparses_all(self) -> None:
        rules = load_builtin_rules()
        assert parse_rules(print_rules(rules)) == rules

    def test_custom_prefixes_declared(self) -> None:
        prefixes = DEFAULT_PREFIXES.with_prefixes({"ex": "http://example.org/"})
        rule = parse_rule(
            "rule r:\nst(X, ex:knows, Y, V1, C1, S1, A1, P1)\n->\n"
            "st(Y, ex:knows, X, V1, C1, S1, A1, P1)\n",
            prefixes,
        )
        text = print_rules([rule], prefixes)
        assert text.startswith("@prefix ex: <http://example.org/> .\n\n")
        assert "@prefix wd:" not in text
        assert parse_rules(text) == [rule]

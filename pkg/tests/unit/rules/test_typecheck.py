"""Unit tests for the rule signature and qualifier_reasoner.rules.typecheck."""

from __future__ import annotations

import pytest

from qualifier_reasoner.knowledge.models import StatementKind
from qualifier_reasoner.rules.ast import Apply, BuiltinAtom, IriConst, Literal, Rule, StatementAtom, Var
from qualifier_reasoner.rules.corpus import load_builtin_rules
from qualifier_reasoner.rules.diagnostics import DiagnosticCode
from qualifier_reasoner.rules.signature import (
    FUNCTIONS,
    PREDICATES,
    Sort,
    assignable,
    is_subsort,
    meet,
    statement_slot_sorts,
)
from qualifier_reasoner.rules.typecheck import typecheck_rule
from qualifier_reasoner.values import Iri

SPOUSE = IriConst(Iri("wd:P26"))


def st_atom(*terms: object) -> StatementAtom:
    return StatementAtom(StatementKind.ST, tuple(terms))  # type: ignore[arg-type]


def body_atom(suffix: str = "1") -> StatementAtom:
    return st_atom(
        Var("X"), SPOUSE, Var("Y"), *(Var(f"{name}{suffix}") for name in "VCSAP")
    )


def codes(rule: Rule) -> list[DiagnosticCode]:
    return [diag.code for diag in typecheck_rule(rule)]


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------


class TestSortOrder:
    """Subsorts, assignability and meets."""

    def test_subsort_chain(self) -> None:
        assert is_subsort(Sort.PROPERTY, Sort.ENTITY)
        assert is_subsort(Sort.PROPERTY, Sort.VALUE)
        assert is_subsort(Sort.DATAVALUE, Sort.VALUE)
        assert not is_subsort(Sort.VALUE, Sort.ENTITY)
        assert not is_subsort(Sort.DATAVALUE, Sort.ENTITY)

    @pytest.mark.parametrize(
        ("actual", "expected"),
        [
            (Sort.ENTITY, Sort.PROPERTY),
            (Sort.VALUE, Sort.ENTITY),
            (Sort.DATAVALUE, Sort.INSTANT),
            (Sort.VALUE, Sort.NAT),
            (Sort.INSTANT, Sort.VALUE),
            (Sort.ENTITY, Sort.ENTITY_SET),
            (Sort.UNDEFINED, Sort.INSTANT),
            (Sort.ANY, Sort.CAUSALITY),
        ],
    )
    def test_assignable(self, actual: Sort, expected: Sort) -> None:
        assert assignable(actual, expected)

    @pytest.mark.parametrize(
        ("actual", "expected"),
        [
            (Sort.CAUSALITY, Sort.VALIDITY),
            (Sort.DATAVALUE, Sort.ENTITY),
            (Sort.DATAVALUE, Sort.ENTITY_SET),
            (Sort.INTERVAL, Sort.VALIDITY),
            (Sort.NAT, Sort.SEQUENCE),
        ],
    )
    def test_not_assignable(self, actual: Sort, expected: Sort) -> None:
        assert not assignable(actual, expected)

    def test_meet(self) -> None:
        assert meet(Sort.ENTITY, Sort.PROPERTY) is Sort.PROPERTY
        assert meet(Sort.ANY, Sort.SEQUENCE) is Sort.SEQUENCE
        assert meet(Sort.VALIDITY, Sort.CAUSALITY) is None


class TestTables:
    """Function and predicate declarations."""

    def test_seq_has_two_overloads(self) -> None:
        assert sorted(FUNCTIONS["seq"]) == [2, 3]

    def test_functions_and_predicates_disjoint(self) -> None:
        assert not FUNCTIONS.keys() & PREDICATES.keys()

    def test_slot_sorts(self) -> None:
        assert len(statement_slot_sorts(StatementKind.ST)) == 8
        sno = statement_slot_sorts(StatementKind.SNO)
        assert len(sno) == 7
        assert sno[2] is Sort.VALIDITY


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------


class TestTypecheck:
    """typecheck_rule on hand-built rules."""

    def test_builtin_corpus_is_well_sorted(self) -> None:
        for rule in load_builtin_rules():
            assert typecheck_rule(rule) == [], rule.name

    def test_swap_rule_clean(self) -> None:
        head = st_atom(Var("Y"), SPOUSE, Var("X"), *(Var(f"{n}1") for n in "VCSAP"))
        assert codes(Rule("swap", (body_atom(),), head)) == []

    def test_unbound_head_variable(self) -> None:
        head = st_atom(Var("Z"), SPOUSE, Var("X"), *(Var(f"{n}1") for n in "VCSAP"))
        (diag,) = typecheck_rule(Rule("r", (body_atom(),), head))
        assert diag.code is DiagnosticCode.UNBOUND_HEAD_VARIABLE
        assert diag.rule == "r"

    def test_variable_only_in_builtin_is_unbound(self) -> None:
        builtin = BuiltinAtom("hasNext", (Var("S9"),))
        rule = Rule("r", (body_atom(), builtin), body_atom())
        assert codes(rule) == [DiagnosticCode.UNBOUND_BUILTIN_VARIABLE]

    def test_function_term_in_body_needs_bound_variables(self) -> None:
        atom = st_atom(
            Var("X"),
            SPOUSE,
            Var("Y"),
            Var("V1"),
            Apply("inverseCause", (Var("C9"),)),
            Var("S1"),
            Var("A1"),
            Var("P1"),
        )
        rule = Rule("r", (atom,), atom)
        assert DiagnosticCode.UNBOUND_BUILTIN_VARIABLE in codes(rule)

    def test_statement_arity(self) -> None:
        short = st_atom(Var("X"), SPOUSE, Var("Y"))
        (diag,) = typecheck_rule(Rule("r", (body_atom(),), short))
        assert diag.code is DiagnosticCode.ARITY_MISMATCH
        assert diag.message == "st takes 8 arguments, got 3"

    def test_function_arity(self) -> None:
        head = st_atom(
            Var("Y"),
            SPOUSE,
            Var("X"),
            Var("V1"),
            Apply("inverseCause", (Var("C1"), Var("C1"))),
            Var("S1"),
            Var("A1"),
            Var("P1"),
        )
        (diag,) = typecheck_rule(Rule("r", (body_atom(),), head))
        assert diag.code is DiagnosticCode.ARITY_MISMATCH
        assert diag.message == "inverseCause takes 1 arguments, got 2"

    def test_predicate_arity(self) -> None:
        builtin = BuiltinAtom("hasNext", (Var("S1"), Var("S1")))
        rule = Rule("r", (body_atom(), builtin), body_atom())
        assert codes(rule) == [DiagnosticCode.ARITY_MISMATCH]

    def test_literal_in_sequence_slot(self) -> None:
        head = st_atom(
            Var("Y"), SPOUSE, Var("X"), Var("V1"), Var("C1"), Literal(3), Var("A1"), Var("P1")
        )
        (diag,) = typecheck_rule(Rule("r", (body_atom(),), head))
        assert diag.code is DiagnosticCode.SORT_MISMATCH
        assert diag.message == "sequence slot expects sequence, got nat"

    def test_argument_sort(self) -> None:
        head = st_atom(
            Var("Y"),
            SPOUSE,
            Var("X"),
            Apply("interValidity", (Var("C1"), Var("V1"))),
            Var("C1"),
            Var("S1"),
            Var("A1"),
            Var("P1"),
        )
        (diag,) = typecheck_rule(Rule("r", (body_atom(),), head))
        assert diag.message == "argument 1 of interValidity expects validity, got causality"

    def test_conflicting_variable_sorts(self) -> None:
        atom = st_atom(
            Var("X"), SPOUSE, Var("Y"), Var("V1"), Var("V1"), Var("S1"), Var("A1"), Var("P1")
        )
        head = st_atom(
            Var("Y"), SPOUSE, Var("X"), Var("V1"), Apply("emptyCause"), Var("S1"), Var("A1"), Var("P1")
        )
        (diag,) = typecheck_rule(Rule("r", (atom,), head))
        assert diag.code is DiagnosticCode.SORT_MISMATCH
        assert diag.message == "variable V1 is used as validity and as causality (causality slot)"

    def test_entity_variable_narrowed_to_property(self) -> None:
        constraint = st_atom(
            Var("P"),
            IriConst(Iri("wd:P2302")),
            IriConst(Iri("wd:Q21510862")),
            *(Var(f"{n}0") for n in "VCSAP"),
        )
        uses = st_atom(Var("X"), Var("P"), Var("Y"), *(Var(f"{n}1") for n in "VCSAP"))
        head = st_atom(Var("Y"), Var("P"), Var("X"), *(Var(f"{n}1") for n in "VCSAP"))
        assert codes(Rule("r", (constraint, uses), head)) == []

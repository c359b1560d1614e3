"""Static checks on parsed rules: range restriction, arities and sorts."""

from __future__ import annotations

from typing import TYPE_CHECKING

from qualifier_reasoner.rules.ast import (
    Apply,
    BuiltinAtom,
    IriConst,
    Literal,
    Position,
    Rule,
    StatementAtom,
    Term,
    Var,
)
from qualifier_reasoner.rules.diagnostics import DiagnosticCode, RuleDiagnostic
from qualifier_reasoner.rules.signature import (
    FUNCTIONS,
    PREDICATES,
    Sort,
    assignable,
    meet,
    statement_slot_sorts,
)

if TYPE_CHECKING:
    from collections.abc import Iterable


class _Checker:
    def __init__(self, rule: Rule) -> None:
        self.rule = rule
        self.diagnostics: list[RuleDiagnostic] = []
        self.var_sorts: dict[str, Sort] = {}
        self._reported_unbound: set[tuple[DiagnosticCode, str]] = set()

    def report(self, code: DiagnosticCode, message: str, pos: Position | None) -> None:
        self.diagnostics.append(
            RuleDiagnostic(
                code,
                message,
                rule=self.rule.name,
                line=pos.line if pos else None,
                column=pos.column if pos else None,
            )
        )

    # -- statement atoms ----------------------------------------------------

    def _arity_ok(self, atom: StatementAtom) -> bool:
        if len(atom.terms) == atom.expected_arity:
            return True
        self.report(
            DiagnosticCode.ARITY_MISMATCH,
            f"{atom.kind.value} takes {atom.expected_arity} arguments, got {len(atom.terms)}",
            atom.pos,
        )
        return False

    def _bind_variables(self, atoms: Iterable[StatementAtom]) -> None:
        for atom in atoms:
            for (slot, term), expected in zip(
                atom.slots(), statement_slot_sorts(atom.kind), strict=False
            ):
                if not isinstance(term, Var):
                    continue
                current = self.var_sorts.get(term.name, Sort.ANY)
                merged = meet(current, expected)
                if merged is None:
                    self.report(
                        DiagnosticCode.SORT_MISMATCH,
                        f"variable {term.name} is used as {current.value} and as "
                        f"{expected.value} ({slot} slot)",
                        term.pos or atom.pos,
                    )
                    continue
                self.var_sorts[term.name] = merged

    def _check_slots(
        self, atom: StatementAtom, unbound_code: DiagnosticCode, *, check_vars: bool
    ) -> None:
        for (slot, term), expected in zip(
            atom.slots(), statement_slot_sorts(atom.kind), strict=False
        ):
            if isinstance(term, Var) and not check_vars:
                continue
            actual = self.term_sort(term, unbound_code, atom.pos)
            if actual is not None and not assignable(actual, expected):
                self.report(
                    DiagnosticCode.SORT_MISMATCH,
                    f"{slot} slot expects {expected.value}, got {actual.value}",
                    term.pos or atom.pos,
                )

    # -- terms --------------------------------------------------------------

    def term_sort(
        self, term: Term, unbound_code: DiagnosticCode, fallback: Position | None
    ) -> Sort | None:
        """Sort of ``term``; ``None`` once a diagnostic has been reported for it."""
        if isinstance(term, Var):
            sort = self.var_sorts.get(term.name)
            if sort is None:
                key = (unbound_code, term.name)
                if key not in self._reported_unbound:
                    self._reported_unbound.add(key)
                    self.report(
                        unbound_code,
                        f"variable {term.name} does not occur in a body statement atom",
                        term.pos or fallback,
                    )
                return None
            return sort
        if isinstance(term, IriConst):
            return Sort.ENTITY
        if isinstance(term, Literal):
            return Sort.NAT if isinstance(term.value, int) else Sort.DATAVALUE
        return self._apply_sort(term, unbound_code, fallback)

    def _apply_sort(
        self, term: Apply, unbound_code: DiagnosticCode, fallback: Position | None
    ) -> Sort | None:
        pos = term.pos or fallback
        overloads = FUNCTIONS.get(term.fn)
        if overloads is None:
            if term.fn in PREDICATES:
                self.report(
                    DiagnosticCode.PREDICATE_AS_FUNCTION,
                    f"{term.fn} is a predicate and cannot be used as a term",
                    pos,
                )
            else:
                self.report(
                    DiagnosticCode.UNKNOWN_FUNCTION, f"unknown function {term.fn}", pos
                )
            return None
        sig = overloads.get(term.arity)
        if sig is None:
            arities = "/".join(str(arity) for arity in sorted(overloads))
            self.report(
                DiagnosticCode.ARITY_MISMATCH,
                f"{term.fn} takes {arities} arguments, got {term.arity}",
                pos,
            )
            return None
        self._check_arguments(term.fn, term.args, sig.params, unbound_code, pos)
        return sig.result

    def _check_arguments(
        self,
        name: str,
        args: tuple[Term, ...],
        params: tuple[Sort, ...],
        unbound_code: DiagnosticCode,
        pos: Position | None,
    ) -> None:
        for index, (arg, expected) in enumerate(zip(args, params, strict=True), start=1):
            actual = self.term_sort(arg, unbound_code, pos)
            if actual is not None and not assignable(actual, expected):
                self.report(
                    DiagnosticCode.SORT_MISMATCH,
                    f"argument {index} of {name} expects {expected.value}, got {actual.value}",
                    arg.pos or pos,
                )

    # -- builtins -----------------------------------------------------------

    def _check_builtin(self, atom: BuiltinAtom) -> None:
        sig = PREDICATES.get(atom.name)
        if sig is None:
            if atom.name in FUNCTIONS:
                self.report(
                    DiagnosticCode.FUNCTION_AS_PREDICATE,
                    f"{atom.name} is a function and cannot be used as a body atom",
                    atom.pos,
                )
            else:
                self.report(
                    DiagnosticCode.UNKNOWN_FUNCTION, f"unknown predicate {atom.name}", atom.pos
                )
            return
        if len(atom.args) != sig.arity:
            self.report(
                DiagnosticCode.ARITY_MISMATCH,
                f"{atom.name} takes {sig.arity} arguments, got {len(atom.args)}",
                atom.pos,
            )
            return
        self._check_arguments(
            atom.name,
            atom.args,
            sig.params,
            DiagnosticCode.UNBOUND_BUILTIN_VARIABLE,
            atom.pos,
        )

    def run(self) -> list[RuleDiagnostic]:
        body_atoms = [atom for atom in self.rule.statement_atoms if self._arity_ok(atom)]
        head_ok = self._arity_ok(self.rule.head)
        self._bind_variables(body_atoms)
        for atom in self.rule.body:
            if isinstance(atom, BuiltinAtom):
                self._check_builtin(atom)
            elif atom in body_atoms:
                self._check_slots(
                    atom, DiagnosticCode.UNBOUND_BUILTIN_VARIABLE, check_vars=False
                )
        if head_ok:
            self._check_slots(
                self.rule.head, DiagnosticCode.UNBOUND_HEAD_VARIABLE, check_vars=True
            )
        return self.diagnostics


def typecheck_rule(rule: Rule) -> list[RuleDiagnostic]:
    """Return every diagnostic for ``rule``; an empty list means it is well-sorted.

    Variables are bound by the direct slots of body statement atoms. Head
    variables and variables inside builtin arguments or body function terms
    must be bound that way.
    """
    return _Checker(rule).run()

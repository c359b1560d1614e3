"""Evaluate rule terms and builtin predicates under a variable binding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from qualifier_reasoner.config import CausalitySettings
from qualifier_reasoner.engine.functions import (
    IMPLEMENTATIONS,
    PREDICATE_IMPLEMENTATIONS,
    coerce,
)
from qualifier_reasoner.exceptions import EvaluationError, SortError
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.rules.ast import Apply, BuiltinAtom, IriConst, Literal, Term, Var
from qualifier_reasoner.rules.signature import FUNCTIONS, PREDICATES
from qualifier_reasoner.sorts.causality import InverseCauseMap
from qualifier_reasoner.sorts.validity import EMPTY_CONTAINMENT, ContainmentTable

if TYPE_CHECKING:
    from qualifier_reasoner.knowledge.models import Binding


def default_inverse_map(prefixes: PrefixTable = DEFAULT_PREFIXES) -> InverseCauseMap:
    """Inverse map pairing death of subject with death of object."""
    settings = CausalitySettings()
    return InverseCauseMap.default(
        prefixes.iri(settings.death_of_subject), prefixes.iri(settings.death_of_object)
    )


@dataclass(frozen=True, slots=True)
class EvaluationContext:
    """Read-only tables consulted while evaluating terms."""

    containment: ContainmentTable = EMPTY_CONTAINMENT
    inverse_map: InverseCauseMap = field(default_factory=default_inverse_map)
    prefixes: PrefixTable = DEFAULT_PREFIXES


def eval_term(term: Term, binding: Binding, ctx: EvaluationContext) -> Any:
    """Evaluate ``term`` bottom-up.

    Raises:
        EvaluationError: If a variable is unbound, a function is unknown,
            an argument has the wrong sort or a partial sort operation is
            applied outside its domain.
    """
    if isinstance(term, Var):
        try:
            return binding[term.name]
        except KeyError:
            msg = f"unbound variable {term.name}"
            raise EvaluationError(msg) from None
    if isinstance(term, IriConst):
        return term.iri
    if isinstance(term, Literal):
        return term.value
    return _eval_apply(term, binding, ctx)


def _eval_apply(term: Apply, binding: Binding, ctx: EvaluationContext) -> Any:
    sig = FUNCTIONS.get(term.fn, {}).get(term.arity)
    if sig is None:
        msg = f"unknown function {term.fn}/{term.arity}"
        raise EvaluationError(msg)
    args = [
        coerce(eval_term(arg, binding, ctx), param)
        for arg, param in zip(term.args, sig.params, strict=True)
    ]
    try:
        return IMPLEMENTATIONS[term.fn](ctx, *args)
    except SortError as exc:
        msg = f"{term.fn}: {exc}"
        raise EvaluationError(msg) from exc


def eval_predicate(atom: BuiltinAtom, binding: Binding, ctx: EvaluationContext) -> bool:
    """Evaluate a builtin predicate.

    Raises:
        EvaluationError: As for :func:`eval_term`.
    """
    sig = PREDICATES.get(atom.name)
    if sig is None or sig.arity != len(atom.args):
        msg = f"unknown predicate {atom.name}/{len(atom.args)}"
        raise EvaluationError(msg)
    args = [
        coerce(eval_term(arg, binding, ctx), param)
        for arg, param in zip(atom.args, sig.params, strict=True)
    ]
    try:
        return bool(PREDICATE_IMPLEMENTATIONS[atom.name](ctx, *args))
    except SortError as exc:
        msg = f"{atom.name}: {exc}"
        raise EvaluationError(msg) from exc

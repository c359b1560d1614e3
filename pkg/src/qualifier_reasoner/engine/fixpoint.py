"""Naive forward chaining: apply every rule each round until nothing is new.

Body statement atoms are joined in textual order against the graph. Builtin
predicates, and equality checks for function terms sitting in body slots,
run as soon as every variable they mention is bound.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, TypeAlias

import structlog
from pydantic import BaseModel, ConfigDict, Field

from qualifier_reasoner.config import EngineSettings
from qualifier_reasoner.engine.evaluate import EvaluationContext, eval_predicate, eval_term
from qualifier_reasoner.engine.functions import PREDICATE_IMPLEMENTATIONS, coerce
from qualifier_reasoner.exceptions import EvaluationError, StatementValidationError
from qualifier_reasoner.knowledge.models import (
    Statement,
    StatementPattern,
    Variable,
    inferred_origin,
)
from qualifier_reasoner.knowledge.store import statement_key
from qualifier_reasoner.logging import log_derivation, phase
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
    term_variables,
)
from qualifier_reasoner.rules.signature import statement_slot_sorts

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from qualifier_reasoner.knowledge.graph import KnowledgeGraph
    from qualifier_reasoner.knowledge.models import Binding

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

# Slots whose function terms are compared after evaluation rather than
# turned into pattern constants up front.
_ENTITY_SLOTS = frozenset({"subject", "prop", "value"})


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


class Derivation(BaseModel):
    """One inferred statement and the body statements that produced it."""

    rule: str
    conclusion: str
    premises: list[str] = Field(default_factory=list)


class RunReport(BaseModel):
    """Outcome of a fixpoint run, serialized with camelCase keys."""

    model_config = ConfigDict(populate_by_name=True)

    rounds: int = 0
    inferred: int = 0
    per_rule: dict[str, int] = Field(default_factory=dict, alias="perRule")
    limit_hit: bool = Field(default=False, alias="limitHit")
    diagnostics: list[str] = Field(default_factory=list)
    derivations: list[Derivation] = Field(default_factory=list)

    def to_json(self, *, include_derivations: bool = False) -> str:
        exclude = None if include_derivations else {"derivations"}
        return self.model_dump_json(by_alias=True, indent=2, exclude=exclude)


# ---------------------------------------------------------------------------
# Join plans
# ---------------------------------------------------------------------------

_Check: TypeAlias = "Callable[[Binding], bool]"


@dataclass(slots=True)
class _JoinStep:
    pattern: StatementPattern
    checks: list[_Check] = field(default_factory=list)


@dataclass(slots=True)
class _Plan:
    rule: Rule
    pre_checks: list[_Check]
    steps: list[_JoinStep]


def _slot_equality(fresh: str, term: Term, ctx: EvaluationContext) -> Callable[[Binding], bool]:
    equal = PREDICATE_IMPLEMENTATIONS["equal"]

    def check(binding: Binding) -> bool:
        return bool(equal(ctx, binding[fresh], eval_term(term, binding, ctx)))

    return check


def _builtin_check(atom: BuiltinAtom, ctx: EvaluationContext) -> Callable[[Binding], bool]:
    def check(binding: Binding) -> bool:
        return eval_predicate(atom, binding, ctx)

    return check


def _plan(rule: Rule, ctx: EvaluationContext) -> _Plan:
    """Turn the rule body into patterns plus checks placed after binding atoms.

    Raises:
        EvaluationError: If a ground term in the body cannot be evaluated.
    """
    bound_at: dict[str, int] = {}
    steps: list[_JoinStep] = []
    pending: list[tuple[_Check, set[str]]] = []
    atom_index = 0

    for atom in rule.body:
        if isinstance(atom, BuiltinAtom):
            pending.append((_builtin_check(atom, ctx), set(atom.variables())))
            continue

        atom_index += 1
        slots: dict[str, Any] = {}
        for (slot, term), sort in zip(atom.slots(), statement_slot_sorts(atom.kind), strict=True):
            if isinstance(term, Var):
                slots[slot] = Variable(term.name)
                bound_at.setdefault(term.name, atom_index)
            elif isinstance(term, IriConst):
                slots[slot] = term.iri
            elif isinstance(term, Literal) or (
                isinstance(term, Apply) and is_ground(term) and slot not in _ENTITY_SLOTS
            ):
                slots[slot] = coerce(eval_term(term, {}, ctx), sort)
            else:
                fresh = f"_f{atom_index}_{slot}"
                slots[slot] = Variable(fresh)
                bound_at[fresh] = atom_index
                needed = {fresh, *term_variables(term)}
                pending.append((_slot_equality(fresh, term, ctx), needed))
        steps.append(_JoinStep(StatementPattern(atom.kind, **slots)))

    pre_checks: list[_Check] = []
    for check, needed in pending:
        position = max((bound_at.get(name, len(steps)) for name in needed), default=0)
        if position == 0:
            pre_checks.append(check)
        else:
            steps[position - 1].checks.append(check)
    return _Plan(rule, pre_checks, steps)


# ---------------------------------------------------------------------------
# Rule application
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class RuleApplication:
    """New statements derived by one rule against one graph state."""

    rule: str
    derived: list[tuple[Statement, list[Statement]]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def statements(self) -> list[Statement]:
        return [statement for statement, _ in self.derived]


def _diagnostic(rule: str, premises: Sequence[Statement], exc: Exception) -> str:
    keys = ", ".join(statement_key(statement) for statement in premises)
    return f"{rule}: {exc} (premises: {keys or 'none'})"


def _run_checks(
    checks: list[_Check],
    binding: Binding,
    premises: Sequence[Statement],
    application: RuleApplication,
) -> bool:
    for check in checks:
        try:
            if not check(binding):
                return False
        except EvaluationError as exc:
            application.diagnostics.append(_diagnostic(application.rule, premises, exc))
            return False
    return True


def _solutions(
    graph: KnowledgeGraph,
    plan: _Plan,
    application: RuleApplication,
) -> Iterator[tuple[Binding, list[Statement]]]:
    if not _run_checks(plan.pre_checks, {}, [], application):
        return

    def walk(
        level: int, binding: Binding, premises: list[Statement]
    ) -> Iterator[tuple[Binding, list[Statement]]]:
        if level == len(plan.steps):
            yield binding, premises
            return
        step = plan.steps[level]
        for statement, extended in graph.query(step.pattern, binding):
            matched = [*premises, statement]
            if _run_checks(step.checks, extended, matched, application):
                yield from walk(level + 1, extended, matched)

    yield from walk(0, {}, [])


def _instantiate(
    head: StatementAtom, binding: Binding, rule: str, ctx: EvaluationContext
) -> Statement:
    values = {
        slot: coerce(eval_term(term, binding, ctx), sort)
        for (slot, term), sort in zip(head.slots(), statement_slot_sorts(head.kind), strict=True)
    }
    return Statement(kind=head.kind, origin=inferred_origin(rule), **values)


def _apply_plan(graph: KnowledgeGraph, plan: _Plan, ctx: EvaluationContext) -> RuleApplication:
    application = RuleApplication(plan.rule.name)
    seen: set[Statement] = set()
    for binding, premises in _solutions(graph, plan, application):
        try:
            statement = _instantiate(plan.rule.head, binding, plan.rule.name, ctx)
        except (EvaluationError, StatementValidationError) as exc:
            application.diagnostics.append(_diagnostic(plan.rule.name, premises, exc))
            continue
        if statement in graph or statement in seen:
            continue
        seen.add(statement)
        application.derived.append((statement, premises))
    return application


def apply_rule(
    graph: KnowledgeGraph,
    rule: Rule,
    ctx: EvaluationContext | None = None,
) -> RuleApplication:
    """Fire ``rule`` once over every binding of its body in ``graph``.

    Evaluation errors skip the offending binding and are reported in the
    returned diagnostics. Statements already in ``graph`` are not returned.
    """
    ctx = ctx or EvaluationContext(prefixes=graph.prefixes)
    try:
        plan = _plan(rule, ctx)
    except EvaluationError as exc:
        return RuleApplication(rule.name, diagnostics=[_diagnostic(rule.name, [], exc)])
    return _apply_plan(graph, plan, ctx)


# ---------------------------------------------------------------------------
# Fixpoint
# ---------------------------------------------------------------------------


def fixpoint(
    graph: KnowledgeGraph,
    rules: Sequence[Rule],
    settings: EngineSettings | None = None,
    ctx: EvaluationContext | None = None,
) -> tuple[KnowledgeGraph, RunReport]:
    """Saturate a copy of ``graph`` under ``rules``.

    Every round applies all rules to the graph as it stood at the start of
    the round; their results are merged in rule order. A round adding
    nothing ends the run. Hitting ``max_rounds`` or ``max_new_statements``
    sets ``limit_hit`` instead of raising.
    """
    settings = settings or EngineSettings()
    ctx = ctx or EvaluationContext(prefixes=graph.prefixes)
    result = graph.copy()
    report = RunReport(per_rule={rule.name: 0 for rule in rules})
    diagnostics: dict[str, None] = {}

    plans: list[_Plan] = []
    for rule in rules:
        try:
            plans.append(_plan(rule, ctx))
        except EvaluationError as exc:
            diagnostics[_diagnostic(rule.name, [], exc)] = None

    pool = ThreadPoolExecutor(max_workers=settings.workers) if settings.workers > 1 else None
    try:
        while True:
            if report.rounds >= settings.max_rounds:
                report.limit_hit = True
                logger.warning("limit_reached", limit="max_rounds", rounds=report.rounds)
                break
            report.rounds += 1
            with phase("fixpoint_round", round=report.rounds, rules=len(plans)) as log:
                if pool is None:
                    applications = [_apply_plan(result, plan, ctx) for plan in plans]
                else:
                    applications = list(
                        pool.map(lambda plan: _apply_plan(result, plan, ctx), plans)
                    )
                added = _merge(result, applications, settings, report, diagnostics)
                log.info("round_complete", added=added, total=len(result))
            if report.limit_hit or added == 0:
                break
    finally:
        if pool is not None:
            pool.shutdown()

    report.diagnostics = list(diagnostics)
    logger.info(
        "fixpoint_complete",
        rounds=report.rounds,
        inferred=report.inferred,
        limit_hit=report.limit_hit,
    )
    return result, report


def _merge(
    graph: KnowledgeGraph,
    applications: list[RuleApplication],
    settings: EngineSettings,
    report: RunReport,
    diagnostics: dict[str, None],
) -> int:
    added = 0
    for application in applications:
        diagnostics.update(dict.fromkeys(application.diagnostics))
        for statement, premises in application.derived:
            if report.inferred >= settings.max_new_statements:
                report.limit_hit = True
                logger.warning("limit_reached", limit="max_new_statements", inferred=report.inferred)
                return added
            try:
                inserted = graph.insert(statement)
            except StatementValidationError as exc:
                diagnostics[_diagnostic(application.rule, premises, exc)] = None
                continue
            if not inserted:
                continue
            added += 1
            report.inferred += 1
            report.per_rule[application.rule] = report.per_rule.get(application.rule, 0) + 1
            if settings.trace_provenance:
                conclusion = statement_key(statement)
                keys = [statement_key(premise) for premise in premises]
                report.derivations.append(
                    Derivation(rule=application.rule, conclusion=conclusion, premises=keys)
                )
                log_derivation(application.rule, conclusion, keys)
        if application.derived:
            logger.debug("rule_applied", rule=application.rule, new=len(application.derived))
    return added

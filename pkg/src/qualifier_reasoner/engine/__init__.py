"""Term evaluation, rule application and the fixpoint loop."""

from qualifier_reasoner.engine.evaluate import EvaluationContext, eval_predicate, eval_term
from qualifier_reasoner.engine.fixpoint import (
    Derivation,
    RuleApplication,
    RunReport,
    apply_rule,
    fixpoint,
)

__all__ = [
    "Derivation",
    "EvaluationContext",
    "RuleApplication",
    "RunReport",
    "apply_rule",
    "eval_predicate",
    "eval_term",
    "fixpoint",
]

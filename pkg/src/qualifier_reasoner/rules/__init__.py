"""Rule language: grammar, AST, signature, typechecker, printer and corpus.

The SPARQL compiler lives in :mod:`qualifier_reasoner.rules.compiler` and is
imported from there, since it evaluates ground terms through the engine.
"""

from qualifier_reasoner.rules.ast import (
    Apply,
    BuiltinAtom,
    IriConst,
    Literal,
    Rule,
    StatementAtom,
    Var,
)
from qualifier_reasoner.rules.corpus import BUILTIN_RULES, builtin_names, load_builtin_rules
from qualifier_reasoner.rules.diagnostics import DiagnosticCode, RuleDiagnostic
from qualifier_reasoner.rules.parser import (
    ParseResult,
    check_rule_file,
    check_rules,
    load_rule_file,
    parse_rule,
    parse_rules,
)
from qualifier_reasoner.rules.printer import print_rule, print_rules
from qualifier_reasoner.rules.typecheck import typecheck_rule

__all__ = [
    "BUILTIN_RULES",
    "Apply",
    "BuiltinAtom",
    "DiagnosticCode",
    "IriConst",
    "Literal",
    "ParseResult",
    "Rule",
    "RuleDiagnostic",
    "StatementAtom",
    "Var",
    "builtin_names",
    "check_rule_file",
    "check_rules",
    "load_builtin_rules",
    "load_rule_file",
    "parse_rule",
    "parse_rules",
    "print_rule",
    "print_rules",
    "typecheck_rule",
]

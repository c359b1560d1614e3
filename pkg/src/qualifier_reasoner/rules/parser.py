"""Parse rule text into :class:`Rule` values.

The grammar lives in ``grammar.lark``. ``@prefix`` lines apply to the
whole file regardless of where they appear. Parsing and typechecking
diagnostics are collected for every rule instead of stopping at the first.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import lark
import structlog

from qualifier_reasoner.exceptions import (
    IngestionError,
    PrefixError,
    RuleSyntaxError,
    RuleValidationError,
)
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.rules.ast import (
    Apply,
    Atom,
    BuiltinAtom,
    IriConst,
    Literal,
    Position,
    Rule,
    StatementAtom,
    Var,
)
from qualifier_reasoner.rules.diagnostics import DiagnosticCode, RuleDiagnostic
from qualifier_reasoner.rules.signature import STATEMENT_KINDS
from qualifier_reasoner.rules.typecheck import typecheck_rule
from qualifier_reasoner.values import (
    XSD_DATE,
    XSD_DATETIME,
    XSD_INTEGER,
    XSD_STRING,
    DataValue,
    Iri,
    datetime_value,
    parse_datetime,
)

if TYPE_CHECKING:
    from pathlib import Path

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

_UNESCAPES = {"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(.)")


@functools.cache
def _parser() -> lark.Lark:
    return lark.Lark.open(
        "grammar.lark",
        rel_to=__file__,
        parser="lalr",
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _pos(token: lark.Token) -> Position:
    return Position(token.line or 0, token.column or 0)


def _unquote(token: lark.Token) -> str:
    return _ESCAPE_RE.sub(lambda m: _UNESCAPES.get(m[1], m[1]), str(token)[1:-1])


@dataclass(frozen=True, slots=True)
class _Header:
    name: str
    pos: Position


@dataclass(frozen=True, slots=True)
class _Body:
    atoms: tuple[Atom, ...]


@dataclass(frozen=True, slots=True)
class _Head:
    atoms: tuple[Atom, ...]


class _RuleTransformer(lark.Transformer[lark.Token, list[Rule]]):
    """Tree to AST; diagnostics are attributed to the enclosing rule."""

    def __init__(self, text: str, prefixes: PrefixTable) -> None:
        super().__init__()
        self.text = text
        self.prefixes = prefixes
        self.diagnostics: list[RuleDiagnostic] = []
        self._pending: list[RuleDiagnostic] = []
        self._count = 0

    def _report(self, code: DiagnosticCode, message: str, pos: Position | None) -> None:
        self._pending.append(
            RuleDiagnostic(
                code,
                message,
                line=pos.line if pos else None,
                column=pos.column if pos else None,
            )
        )

    # -- terms --------------------------------------------------------------

    @lark.v_args(inline=True)
    def var(self, token: lark.Token) -> Var:
        return Var(str(token), _pos(token))

    @lark.v_args(inline=True)
    def iri(self, token: lark.Token) -> IriConst:
        text = str(token)
        try:
            iri = self.prefixes.iri(text)
        except PrefixError as exc:
            self._report(DiagnosticCode.UNKNOWN_PREFIX, str(exc), _pos(token))
            iri = Iri(text)
        return IriConst(iri, _pos(token))

    @lark.v_args(inline=True)
    def plain_string(self, token: lark.Token) -> Literal:
        return Literal(DataValue(_unquote(token)), _pos(token))

    @lark.v_args(inline=True)
    def lang_string(self, token: lark.Token, tag: lark.Token) -> Literal:
        return Literal(DataValue(_unquote(token), XSD_STRING, str(tag)[1:]), _pos(token))

    @lark.v_args(inline=True)
    def typed_string(self, token: lark.Token, datatype: IriConst) -> Literal:
        lexical = _unquote(token)
        dt = datatype.iri.text
        try:
            if dt == XSD_DATETIME:
                return Literal(datetime_value(parse_datetime(lexical)), _pos(token))
            if dt == XSD_DATE:
                parse_datetime(lexical)
            elif dt == XSD_INTEGER:
                int(lexical)
        except ValueError:
            self._report(
                DiagnosticCode.BAD_LITERAL,
                f"{lexical!r} is not a valid {dt} literal",
                _pos(token),
            )
        return Literal(DataValue(lexical, dt), _pos(token))

    @lark.v_args(inline=True)
    def nat(self, token: lark.Token) -> Literal:
        return Literal(int(token), _pos(token))

    @lark.v_args(inline=True)
    def apply(self, name: lark.Token, arguments: list[Any] | None) -> Apply:
        return Apply(str(name), tuple(arguments or ()), _pos(name))

    @lark.v_args(inline=True)
    def constant(self, name: lark.Token) -> Apply:
        return Apply(str(name), (), _pos(name))

    def arguments(self, items: list[Any]) -> list[Any]:
        return list(items)

    # -- atoms and rules ----------------------------------------------------

    @lark.v_args(inline=True)
    def atom(self, name: lark.Token, arguments: list[Any] | None) -> Atom:
        args = tuple(arguments or ())
        kind = STATEMENT_KINDS.get(str(name))
        if kind is not None:
            return StatementAtom(kind, args, _pos(name))
        return BuiltinAtom(str(name), args, _pos(name))

    def body(self, items: list[Atom]) -> _Body:
        return _Body(tuple(items))

    def head(self, items: list[Atom]) -> _Head:
        return _Head(tuple(items))

    @lark.v_args(inline=True)
    def header(self, name: lark.Token) -> _Header:
        return _Header(str(name), _pos(name))

    @lark.v_args(meta=True)
    def rule_def(self, meta: Any, items: list[Any]) -> Rule | None:
        self._count += 1
        header = next((item for item in items if isinstance(item, _Header)), None)
        body = next(item for item in items if isinstance(item, _Body))
        head = next(item for item in items if isinstance(item, _Head))
        name = header.name if header else f"rule_{self._count}"
        pos = header.pos if header else body.atoms[0].pos

        rule: Rule | None = None
        if len(head.atoms) > 1:
            self._report(
                DiagnosticCode.NON_HORN_RULE,
                "rule heads must be a single statement atom; conjunctive "
                "(existential) heads are not supported",
                head.atoms[1].pos,
            )
        elif not isinstance(head.atoms[0], StatementAtom):
            self._report(
                DiagnosticCode.SYNTAX_ERROR,
                f"rule head must be a statement atom, got {head.atoms[0].name}",
                head.atoms[0].pos,
            )
        else:
            source = self.text[meta.start_pos : meta.end_pos] if not meta.empty else None
            rule = Rule(name, body.atoms, head.atoms[0], pos, source)

        self.diagnostics.extend(replace(diag, rule=name) for diag in self._pending)
        self._pending.clear()
        return rule

    def prefix_decl(self, items: list[Any]) -> None:
        return None

    def start(self, items: list[Any]) -> list[Rule]:
        return [item for item in items if isinstance(item, Rule)]


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class ParseResult:
    """Rules that parsed and typechecked cleanly, plus every diagnostic."""

    rules: list[Rule] = field(default_factory=list)
    diagnostics: list[RuleDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def _syntax_diagnostic(exc: lark.UnexpectedInput) -> RuleDiagnostic:
    if isinstance(exc, lark.UnexpectedToken) and exc.token.type == "$END":
        message = "unexpected end of input"
    elif isinstance(exc, lark.UnexpectedToken):
        expected = ", ".join(sorted(exc.expected)[:6])
        message = f"unexpected {str(exc.token)!r}; expected one of: {expected}"
    elif isinstance(exc, lark.UnexpectedCharacters):
        message = f"unexpected character {exc.char!r}"
    else:
        message = "unexpected end of input"
    line = exc.line if isinstance(exc.line, int) and exc.line > 0 else None
    column = exc.column if isinstance(exc.column, int) and exc.column > 0 else None
    return RuleDiagnostic(DiagnosticCode.SYNTAX_ERROR, message, line=line, column=column)


def _file_prefixes(tree: lark.Tree[lark.Token], prefixes: PrefixTable) -> PrefixTable:
    declared: dict[str, str] = {}
    for decl in tree.find_data("prefix_decl"):
        name, base = decl.children[-2:]
        declared[str(name)[:-1]] = str(base)[1:-1]
    return prefixes.with_prefixes(declared) if declared else prefixes


def check_rules(
    text: str,
    prefixes: PrefixTable = DEFAULT_PREFIXES,
    source: str = "<string>",
) -> ParseResult:
    """Parse and typecheck ``text`` without raising."""
    try:
        tree = _parser().parse(text)
    except lark.UnexpectedInput as exc:
        diagnostic = _syntax_diagnostic(exc)
        logger.debug("rule_syntax_error", source=source, error=str(diagnostic))
        return ParseResult([], [diagnostic])

    transformer = _RuleTransformer(text, _file_prefixes(tree, prefixes))
    parsed = transformer.transform(tree)
    result = ParseResult(diagnostics=list(transformer.diagnostics))
    failed = {diag.rule for diag in transformer.diagnostics}
    for rule in parsed:
        problems = typecheck_rule(rule)
        result.diagnostics.extend(problems)
        if not problems and rule.name not in failed:
            result.rules.append(rule)
    logger.debug(
        "rules_checked",
        source=source,
        rules=len(result.rules),
        diagnostics=len(result.diagnostics),
    )
    return result


def parse_rules(
    text: str,
    prefixes: PrefixTable = DEFAULT_PREFIXES,
    source: str = "<string>",
) -> list[Rule]:
    """Parse and typecheck every rule in ``text``.

    Raises:
        RuleSyntaxError: If the text does not match the grammar, uses an
            undeclared prefix, a malformed literal or a non-Horn head.
        RuleValidationError: If a rule fails range restriction, arity or
            sort checks.
    """
    result = check_rules(text, prefixes, source)
    if result.diagnostics:
        if any(diag.code.is_syntactic for diag in result.diagnostics):
            raise RuleSyntaxError(result.diagnostics)
        raise RuleValidationError(result.diagnostics)
    return result.rules


def parse_rule(text: str, prefixes: PrefixTable = DEFAULT_PREFIXES) -> Rule:
    """Parse text holding exactly one rule.

    Raises:
        RuleSyntaxError: If the text is malformed or holds more or fewer
            than one rule.
        RuleValidationError: If the rule fails static checks.
    """
    rules = parse_rules(text, prefixes)
    if len(rules) != 1:
        raise RuleSyntaxError(
            [
                RuleDiagnostic(
                    DiagnosticCode.SYNTAX_ERROR,
                    f"expected exactly one rule, found {len(rules)}",
                )
            ]
        )
    return rules[0]


def load_rule_file(path: Path, prefixes: PrefixTable = DEFAULT_PREFIXES) -> list[Rule]:
    """Read and parse a ``.rules`` file.

    Raises:
        IngestionError: If the file cannot be read.
        RuleSyntaxError: See :func:`parse_rules`.
        RuleValidationError: See :func:`parse_rules`.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc}"
        raise IngestionError(msg) from exc
    rules = parse_rules(text, prefixes, source=str(path))
    logger.info("rules_loaded", path=str(path), rules=len(rules))
    return rules


def check_rule_file(path: Path, prefixes: PrefixTable = DEFAULT_PREFIXES) -> ParseResult:
    """Like :func:`check_rules` for a file.

    Raises:
        IngestionError: If the file cannot be read.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc}"
        raise IngestionError(msg) from exc
    return check_rules(text, prefixes, source=str(path))

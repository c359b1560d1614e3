"""Typer CLI entry point for qualifier-reasoner."""

from __future__ import annotations

import sys
from enum import StrEnum
from pathlib import Path
from typing import Annotated, Any, NoReturn

import click
import structlog
import typer
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from qualifier_reasoner import __version__
from qualifier_reasoner.config import Settings, format_validation_error
from qualifier_reasoner.engine import EvaluationContext, fixpoint
from qualifier_reasoner.exceptions import (
    CompileError,
    IngestionError,
    PrefixError,
    RuleDiagnosticsError,
    RuleLookupError,
)
from qualifier_reasoner.knowledge import load_graph, save_graph
from qualifier_reasoner.knowledge.emit import emit_sort_triples
from qualifier_reasoner.knowledge.turtle import ingest_turtle
from qualifier_reasoner.logging import configure_logging, phase, reasoning_run
from qualifier_reasoner.prefixes import DEFAULT_PREFIXES, PrefixTable
from qualifier_reasoner.rules import (
    BUILTIN_RULES,
    Rule,
    RuleDiagnostic,
    check_rule_file,
    load_builtin_rules,
    load_rule_file,
)
from qualifier_reasoner.rules.compiler import write_queries
from qualifier_reasoner.sorts import DEFAULT_CATEGORY_MAP, ContainmentTable, InverseCauseMap

logger: structlog.stdlib.BoundLogger = structlog.get_logger(__name__)

console = Console()
err_console = Console(stderr=True)

app = typer.Typer(
    name="qualifier-reasoner",
    help="Reason over qualified knowledge-graph statements with many-sorted rules.",
    no_args_is_help=True,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FATAL = 2
EXIT_LIMIT = 3
EXIT_RULES = 4


class InputFormat(StrEnum):
    TURTLE = "turtle"
    NDJSON = "ndjson"


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

# Global --log-level / --log-format, applied over the loaded settings.
_log_overrides: dict[str, str] = {}


def _load_settings(
    config_path: Path | None = None,
    **overrides: Any,
) -> Settings:
    """Load settings with error handling and user-friendly messages."""
    from pydantic import ValidationError

    if _log_overrides:
        overrides.setdefault("logging", {}).update(_log_overrides)
    try:
        return Settings.load(config_path=config_path, **overrides)
    except ValidationError as exc:
        err_console.print(
            Panel(
                format_validation_error(exc),
                title="Configuration Error",
                border_style="red",
            )
        )
        raise typer.Exit(code=EXIT_USAGE) from exc


def _setup_logging(settings: Settings) -> None:
    configure_logging(settings.logging)


def _fatal(exc: Exception, title: str = "Error") -> NoReturn:
    err_console.print(Panel(f"[red]{escape(str(exc))}[/red]", title=title, border_style="red"))
    raise typer.Exit(code=EXIT_FATAL) from exc


def _prefix_table(settings: Settings) -> PrefixTable:
    return DEFAULT_PREFIXES.with_prefixes(settings.prefixes.extra)


def _print_rule_diagnostics(diagnostics: list[RuleDiagnostic], source: str) -> None:
    table = Table(title=f"Rule diagnostics: {source}", show_lines=False)
    table.add_column("Code", style="red")
    table.add_column("Rule", style="cyan")
    table.add_column("Location", justify="right")
    table.add_column("Message")
    for diag in diagnostics:
        table.add_row(diag.code.value, escape(diag.rule or ""), diag.location, escape(diag.message))
    err_console.print(table)


def _print_item_diagnostics(diagnostics: list[str], title: str) -> None:
    if not diagnostics:
        return
    err_console.print(f"[yellow]{title}: {len(diagnostics)}[/yellow]")
    for line in diagnostics:
        err_console.print(f"  [dim]{escape(line)}[/dim]")


def _version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold]qualifier-reasoner[/bold] {__version__}")
        raise typer.Exit


@app.callback()
def common(
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            "-V",
            help="Show version and exit.",
            callback=_version_callback,
            is_eager=True,
        ),
    ] = None,
    log_level: Annotated[
        str | None,
        typer.Option("--log-level", help="Override logging.level for this run."),
    ] = None,
    log_format: Annotated[
        str | None,
        typer.Option("--log-format", help="Override logging.format (console | json)."),
    ] = None,
) -> None:
    """Qualifier-reasoner global options."""
    _log_overrides.clear()
    if log_level is not None:
        _log_overrides["level"] = log_level.upper()
    if log_format is not None:
        _log_overrides["format"] = log_format


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@app.command()
def ingest(
    input_path: Annotated[
        Path,
        typer.Option("--in", "-i", help="Turtle or NDJSON file to read."),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", "-o", help="Destination NDJSON graph file."),
    ],
    fmt: Annotated[
        InputFormat,
        typer.Option("--format", "-f", help="Input format."),
    ] = InputFormat.TURTLE,
    containment: Annotated[
        Path | None,
        typer.Option("--containment", help="CSV of (inner, outer) region facts."),
    ] = None,
    category_map: Annotated[
        Path | None,
        typer.Option("--category-map", help="CSV of (property, category, role) overrides."),
    ] = None,
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Path to config YAML file."),
    ] = None,
) -> None:
    """Ingest statements into a native NDJSON graph."""
    data: dict[str, Any] = {}
    if containment is not None:
        data["containment_file"] = containment
    if category_map is not None:
        data["category_map_file"] = category_map
    settings = _load_settings(config, **({"data": data} if data else {}))
    _setup_logging(settings)
    prefixes = _prefix_table(settings)

    try:
        if fmt is InputFormat.NDJSON:
            graph = load_graph(input_path, prefixes)
            diagnostics: list[str] = []
        else:
            table = (
                ContainmentTable.from_csv(settings.data.containment_file, prefixes)
                if settings.data.containment_file
                else None
            )
            categories = (
                DEFAULT_CATEGORY_MAP.load_csv(settings.data.category_map_file, prefixes)
                if settings.data.category_map_file
                else DEFAULT_CATEGORY_MAP
            )
            graph, report = ingest_turtle(input_path, prefixes, categories, table)
            diagnostics = report.diagnostics
        save_graph(graph, out)
    except (IngestionError, PrefixError, OSError, ValueError, KeyError) as exc:
        _fatal(exc, title="Ingestion Error")

    _print_item_diagnostics(diagnostics, "Skipped items")
    console.print(f"[green]Wrote[/green] {len(graph)} statements to [cyan]{out}[/cyan]")


@app.command()
def sorts(
    input_path: Annotated[
        Path,
        typer.Option("--in", "-i", help="NDJSON graph file."),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", "-o", help="Destination Turtle file of sort triples."),
    ],
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Path to config YAML file."),
    ] = None,
) -> None:
    """Emit the five sort-value triples of every statement as Turtle."""
    settings = _load_settings(config)
    _setup_logging(settings)
    try:
        graph = load_graph(input_path, _prefix_table(settings))
        emit_sort_triples(graph, out)
    except (IngestionError, PrefixError) as exc:
        _fatal(exc)
    console.print(f"[green]Wrote[/green] sort triples for {len(graph)} statements to [cyan]{out}[/cyan]")


def _load_rules(
    rule_files: list[Path],
    builtin: str | None,
    prefixes: PrefixTable,
) -> list[Rule]:
    rules: list[Rule] = []
    if builtin:
        names = [name.strip() for name in builtin.split(",") if name.strip()]
        try:
            rules.extend(load_builtin_rules(names))
        except RuleLookupError as exc:
            err_console.print(f"[red]{escape(str(exc))}[/red]")
            raise typer.Exit(code=EXIT_USAGE) from exc
    for path in rule_files:
        try:
            rules.extend(load_rule_file(path, prefixes))
        except IngestionError as exc:
            _fatal(exc)
        except RuleDiagnosticsError as exc:
            _print_rule_diagnostics(exc.diagnostics, str(path))
            raise typer.Exit(code=EXIT_RULES) from exc
    return rules


@app.command()
def infer(
    graph_path: Annotated[
        Path,
        typer.Option("--graph", "-g", help="NDJSON graph to saturate."),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", "-o", help="Destination NDJSON file for the saturated graph."),
    ],
    report_path: Annotated[
        Path | None,
        typer.Option("--report", "-r", help="Write the run report as JSON."),
    ] = None,
    rule_files: Annotated[
        list[Path] | None,
        typer.Option("--rules", help="Rule file (repeatable)."),
    ] = None,
    builtin: Annotated[
        str | None,
        typer.Option("--builtin", "-b", help="'all' or comma-separated built-in rule names."),
    ] = None,
    max_rounds: Annotated[
        int | None,
        typer.Option("--max-rounds", help="Stop after this many rounds."),
    ] = None,
    max_new: Annotated[
        int | None,
        typer.Option("--max-new", help="Stop after inferring this many statements."),
    ] = None,
    workers: Annotated[
        int | None,
        typer.Option("--workers", "-w", help="Threads applying rules within a round."),
    ] = None,
    trace: Annotated[
        bool,
        typer.Option("--trace", help="Record premises of every inferred statement."),
    ] = False,
    containment: Annotated[
        Path | None,
        typer.Option("--containment", help="CSV of (inner, outer) region facts."),
    ] = None,
    inverse_map: Annotated[
        Path | None,
        typer.Option("--inverse-map", help="CSV of (entity, inverse) cause pairs."),
    ] = None,
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Path to config YAML file."),
    ] = None,
) -> None:
    """Apply rules to a graph until nothing new is inferred."""
    engine: dict[str, Any] = {}
    if max_rounds is not None:
        engine["max_rounds"] = max_rounds
    if max_new is not None:
        engine["max_new_statements"] = max_new
    if workers is not None:
        engine["workers"] = workers
    if trace:
        engine["trace_provenance"] = True
    data: dict[str, Any] = {}
    if containment is not None:
        data["containment_file"] = containment
    if inverse_map is not None:
        data["inverse_cause_file"] = inverse_map
    overrides: dict[str, Any] = {}
    if engine:
        overrides["engine"] = engine
    if data:
        overrides["data"] = data

    settings = _load_settings(config, **overrides)
    _setup_logging(settings)
    with reasoning_run() as run_id:
        prefixes = _prefix_table(settings)

        rules = _load_rules(rule_files or [], builtin, prefixes)

        with phase("load_inputs", graph=str(graph_path)):
            try:
                graph = load_graph(graph_path, prefixes)
                table = (
                    ContainmentTable.from_csv(settings.data.containment_file, prefixes)
                    if settings.data.containment_file
                    else ContainmentTable()
                )
                inverses = InverseCauseMap.default(
                    prefixes.iri(settings.causality.death_of_subject),
                    prefixes.iri(settings.causality.death_of_object),
                )
                if settings.data.inverse_cause_file:
                    inverses.load_csv(settings.data.inverse_cause_file, prefixes)
            except (IngestionError, PrefixError, OSError, ValueError, KeyError) as exc:
                _fatal(exc)

        ctx = EvaluationContext(containment=table, inverse_map=inverses, prefixes=prefixes)
        result, report = fixpoint(graph, rules, settings.engine, ctx)

        try:
            save_graph(result, out)
            if report_path is not None:
                report_path.parent.mkdir(parents=True, exist_ok=True)
                report_path.write_text(
                    report.to_json(include_derivations=settings.engine.trace_provenance) + "\n",
                    encoding="utf-8",
                )
        except (IngestionError, OSError) as exc:
            _fatal(exc)

        summary = Table(title=f"Inference run {run_id}")
        summary.add_column("Rule", style="cyan")
        summary.add_column("Inferred", justify="right")
        for name, count in report.per_rule.items():
            summary.add_row(name, str(count))
        console.print(summary)
        console.print(
            f"Rounds: {report.rounds}  Inferred: {report.inferred}  "
            f"Total: {len(result)}  Output: [cyan]{out}[/cyan]"
        )
        _print_item_diagnostics(report.diagnostics, "Evaluation diagnostics")

        if report.limit_hit:
            err_console.print("[yellow]Stopped by an engine limit before saturation.[/yellow]")
            raise typer.Exit(code=EXIT_LIMIT)


@app.command(name="compile")
def compile_cmd(
    rule_file: Annotated[
        Path,
        typer.Option("--rule", help="Rule file to compile."),
    ],
    out_dir: Annotated[
        Path,
        typer.Option("--out", "-o", help="Directory receiving one .rq file per rule."),
    ],
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Path to config YAML file."),
    ] = None,
) -> None:
    """Compile rules to SPARQL CONSTRUCT queries."""
    settings = _load_settings(config)
    _setup_logging(settings)
    prefixes = _prefix_table(settings)
    rules = _load_rules([rule_file], None, prefixes)
    try:
        written = write_queries(rules, out_dir, prefixes)
    except CompileError as exc:
        err_console.print(Panel(f"[red]{escape(str(exc))}[/red]", title="Compile Error", border_style="red"))
        raise typer.Exit(code=EXIT_RULES) from exc
    except OSError as exc:
        _fatal(exc)
    for path in written:
        console.print(f"[green]Wrote[/green] {path}")


@app.command()
def check(
    rule_files: Annotated[
        list[Path] | None,
        typer.Option("--rules", help="Rule file to check (repeatable)."),
    ] = None,
    builtin: Annotated[
        bool,
        typer.Option("--builtin", help="Also check the built-in rule corpus."),
    ] = False,
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Path to config YAML file."),
    ] = None,
) -> None:
    """Parse and typecheck rule files; exit 0 only if they are clean."""
    settings = _load_settings(config)
    _setup_logging(settings)
    prefixes = _prefix_table(settings)

    paths = list(rule_files or [])
    if builtin:
        paths.extend(entry.path for entry in BUILTIN_RULES)
    if not paths:
        err_console.print("[red]Nothing to check:[/red] pass --rules FILE or --builtin.")
        raise typer.Exit(code=EXIT_USAGE)

    clean = True
    checked = 0
    for path in paths:
        try:
            result = check_rule_file(path, prefixes)
        except IngestionError as exc:
            _fatal(exc)
        checked += len(result.rules)
        if not result.ok:
            clean = False
            _print_rule_diagnostics(result.diagnostics, str(path))

    if not clean:
        raise typer.Exit(code=EXIT_RULES)
    console.print(f"[green]OK[/green] {checked} rules in {len(paths)} file(s)")


def main() -> None:
    """Main entry point for the CLI."""
    try:
        code = app(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.Abort:
        err_console.print("[red]Aborted.[/red]")
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else EXIT_OK)


if __name__ == "__main__":
    main()

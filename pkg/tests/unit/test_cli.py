"""Unit tests for qualifier_reasoner.cli - commands, options and exit codes."""

from __future__ import annotations

import json
import sys
from typing import TYPE_CHECKING

import click
import pytest
from typer.testing import CliRunner

import qualifier_reasoner.cli as cli_module
from qualifier_reasoner import __version__
from qualifier_reasoner.cli import (
    EXIT_FATAL,
    EXIT_LIMIT,
    EXIT_OK,
    EXIT_RULES,
    EXIT_USAGE,
    app,
    main,
)

if TYPE_CHECKING:
    from pathlib import Path

runner = CliRunner()

BAD_RULE = """rule bad:
st(X, :P26, Y, V1, C1, S1, A1, P1)
->
st(Z, :P26, X, V1, C1, S1, A1, P1)
"""

SNO_HEAD_RULE = """rule sno_head:
st(X, :P26, Y, V1, C1, S1, A1, P1)
->
sno(X, :P27, V1, C1, S1, A1, P1)
"""


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep a stray config.yaml or .env in the working directory out of the tests."""
    monkeypatch.chdir(tmp_path)


@pytest.fixture()
def graph_file(tmp_path: Path, fixtures_dir: Path) -> Path:
    out = tmp_path / "graph.ndjson"
    result = runner.invoke(
        app, ["ingest", "--in", str(fixtures_dir / "statements.ttl"), "--out", str(out)]
    )
    assert result.exit_code == EXIT_OK, result.output
    return out


# ---- Version and help -------------------------------------------------------


class TestVersionAndHelp:
    """Version flag and help text output."""

    def test_version_flag(self) -> None:
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_short_version_flag(self) -> None:
        result = runner.invoke(app, ["-V"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_help_lists_commands(self) -> None:
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        for command in ("ingest", "sorts", "infer", "compile", "check"):
            assert command in result.output

    def test_no_args_shows_help(self) -> None:
        result = runner.invoke(app, [])
        assert result.exit_code in (0, 2)
        assert "Usage" in result.output


# ---- ingest / sorts ---------------------------------------------------------


class TestIngest:
    """ingest converts Turtle or NDJSON into a native graph."""

    def test_turtle(self, graph_file: Path) -> None:
        lines = graph_file.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 5
        assert all(json.loads(line)["origin"] == "asserted" for line in lines)

    def test_reports_skipped_triples(self, tmp_path: Path, fixtures_dir: Path) -> None:
        result = runner.invoke(
            app,
            [
                "ingest",
                "--in",
                str(fixtures_dir / "statements.ttl"),
                "--out",
                str(tmp_path / "g.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_OK
        assert "Skipped items: 1" in result.output

    def test_ndjson_roundtrip(self, graph_file: Path, tmp_path: Path) -> None:
        copy = tmp_path / "copy.ndjson"
        result = runner.invoke(
            app, ["ingest", "--in", str(graph_file), "--format", "ndjson", "--out", str(copy)]
        )
        assert result.exit_code == EXIT_OK
        assert copy.read_bytes() == graph_file.read_bytes()

    def test_missing_input_is_fatal(self, tmp_path: Path) -> None:
        result = runner.invoke(
            app, ["ingest", "--in", str(tmp_path / "absent.ttl"), "--out", str(tmp_path / "g")]
        )
        assert result.exit_code == EXIT_FATAL

    def test_unknown_format_is_usage_error(self, tmp_path: Path) -> None:
        result = runner.invoke(
            app,
            ["ingest", "--in", "x", "--format", "xml", "--out", str(tmp_path / "g")],
        )
        assert result.exit_code == 2


class TestSorts:
    """sorts emits sort-value triples."""

    def test_emits_turtle(self, graph_file: Path, tmp_path: Path) -> None:
        out = tmp_path / "sorts.ttl"
        result = runner.invoke(app, ["sorts", "--in", str(graph_file), "--out", str(out)])
        assert result.exit_code == EXIT_OK
        text = out.read_text(encoding="utf-8")
        assert text.count("pq:validityJ") == 5

    def test_bad_graph_is_fatal(self, tmp_path: Path) -> None:
        bad = tmp_path / "bad.ndjson"
        bad.write_text("not json\n", encoding="utf-8")
        result = runner.invoke(app, ["sorts", "--in", str(bad), "--out", str(tmp_path / "s.ttl")])
        assert result.exit_code == EXIT_FATAL


# ---- infer ------------------------------------------------------------------


class TestInfer:
    """infer saturates a graph and reports through exit codes."""

    def test_builtin_rules(self, graph_file: Path, tmp_path: Path) -> None:
        out = tmp_path / "saturated.ndjson"
        report = tmp_path / "report.json"
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--builtin",
                "all",
                "--out",
                str(out),
                "--report",
                str(report),
            ],
        )
        assert result.exit_code == EXIT_OK, result.output
        assert len(out.read_text(encoding="utf-8").splitlines()) == 10
        data = json.loads(report.read_text(encoding="utf-8"))
        assert data["inferred"] == 5
        assert data["perRule"]["symmetry"] == 1
        assert data["limitHit"] is False
        assert "derivations" not in data

    def test_rule_file(self, graph_file: Path, tmp_path: Path, rules_dir: Path) -> None:
        out = tmp_path / "saturated.ndjson"
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--rules",
                str(rules_dir / "part_of_transitive.rules"),
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == EXIT_OK
        assert '"origin":"inferred:part_of_transitive"' in out.read_text(encoding="utf-8")

    def test_trace_writes_derivations(self, graph_file: Path, tmp_path: Path) -> None:
        report = tmp_path / "report.json"
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--builtin",
                "symmetry",
                "--trace",
                "--out",
                str(tmp_path / "out.ndjson"),
                "--report",
                str(report),
            ],
        )
        assert result.exit_code == EXIT_OK
        (derivation,) = json.loads(report.read_text(encoding="utf-8"))["derivations"]
        assert derivation["rule"] == "symmetry"
        assert len(derivation["premises"]) == 2

    def test_limit_hit_exit_code(self, graph_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--builtin",
                "all",
                "--max-rounds",
                "1",
                "--out",
                str(tmp_path / "out.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_LIMIT
        assert (tmp_path / "out.ndjson").exists()

    def test_unknown_builtin_is_usage_error(self, graph_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--builtin",
                "transitivity",
                "--out",
                str(tmp_path / "out.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_USAGE

    def test_invalid_rule_file(self, graph_file: Path, tmp_path: Path) -> None:
        rules = tmp_path / "bad.rules"
        rules.write_text(BAD_RULE, encoding="utf-8")
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--rules",
                str(rules),
                "--out",
                str(tmp_path / "out.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_RULES

    def test_missing_graph_is_fatal(self, tmp_path: Path) -> None:
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(tmp_path / "absent.ndjson"),
                "--builtin",
                "all",
                "--out",
                str(tmp_path / "out.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_FATAL

    def test_invalid_config_is_usage_error(self, graph_file: Path, tmp_path: Path) -> None:
        config = tmp_path / "bad.yaml"
        config.write_text("engine:\n  max_rounds: 0\n", encoding="utf-8")
        result = runner.invoke(
            app,
            [
                "infer",
                "--graph",
                str(graph_file),
                "--builtin",
                "all",
                "--config",
                str(config),
                "--out",
                str(tmp_path / "out.ndjson"),
            ],
        )
        assert result.exit_code == EXIT_USAGE
        assert "Configuration Error" in result.output

    def test_workers_option_gives_same_graph(self, graph_file: Path, tmp_path: Path) -> None:
        outputs = []
        for workers in ("1", "4"):
            out = tmp_path / f"out-{workers}.ndjson"
            result = runner.invoke(
                app,
                [
                    "infer",
                    "--graph",
                    str(graph_file),
                    "--builtin",
                    "all",
                    "--workers",
                    workers,
                    "--out",
                    str(out),
                ],
            )
            assert result.exit_code == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]


# ---- compile / check --------------------------------------------------------


class TestCompile:
    """compile writes one CONSTRUCT query per rule."""

    def test_writes_golden_query(self, tmp_path: Path, fixtures_dir: Path) -> None:
        out_dir = tmp_path / "queries"
        result = runner.invoke(
            app,
            [
                "compile",
                "--rule",
                str(fixtures_dir / "rules" / "spouse_death.rules"),
                "--out",
                str(out_dir),
            ],
        )
        assert result.exit_code == EXIT_OK
        expected = (fixtures_dir / "golden" / "spouse_death.rq").read_text(encoding="utf-8")
        assert (out_dir / "spouse_death.rq").read_text(encoding="utf-8") == expected

    def test_unsupported_rule(self, tmp_path: Path) -> None:
        rules = tmp_path / "sno.rules"
        rules.write_text(SNO_HEAD_RULE, encoding="utf-8")
        result = runner.invoke(
            app, ["compile", "--rule", str(rules), "--out", str(tmp_path / "q")]
        )
        assert result.exit_code == EXIT_RULES
        assert "Compile Error" in result.output

    def test_invalid_rule(self, tmp_path: Path) -> None:
        rules = tmp_path / "bad.rules"
        rules.write_text(BAD_RULE, encoding="utf-8")
        result = runner.invoke(
            app, ["compile", "--rule", str(rules), "--out", str(tmp_path / "q")]
        )
        assert result.exit_code == EXIT_RULES


class TestCheck:
    """check validates rule files without running them."""

    def test_builtin_corpus_is_clean(self) -> None:
        result = runner.invoke(app, ["check", "--builtin"])
        assert result.exit_code == EXIT_OK
        assert "12 rules" in result.output

    def test_clean_file(self, rules_dir: Path) -> None:
        result = runner.invoke(
            app, ["check", "--rules", str(rules_dir / "minimal_symmetric.rules")]
        )
        assert result.exit_code == EXIT_OK

    def test_diagnostics_exit_code(self, tmp_path: Path) -> None:
        rules = tmp_path / "bad.rules"
        rules.write_text(BAD_RULE, encoding="utf-8")
        result = runner.invoke(app, ["check", "--rules", str(rules)])
        assert result.exit_code == EXIT_RULES

    def test_nothing_to_check(self) -> None:
        result = runner.invoke(app, ["check"])
        assert result.exit_code == EXIT_USAGE

    def test_missing_file_is_fatal(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["check", "--rules", str(tmp_path / "absent.rules")])
        assert result.exit_code == EXIT_FATAL


# ---- main -------------------------------------------------------------------


class TestMain:
    """The console-script entry point maps click errors to exit codes."""

    def test_version(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(sys, "argv", ["qualifier-reasoner", "--version"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_OK

    def test_unknown_command(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(sys, "argv", ["qualifier-reasoner", "bogus"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_USAGE

    def test_missing_required_option(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(sys, "argv", ["qualifier-reasoner", "ingest", "--in", "x.ttl"])
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_USAGE

    def test_abort_is_usage_exit(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def interrupted(**_: object) -> None:
            raise click.Abort

        monkeypatch.setattr(cli_module, "app", interrupted)
        with pytest.raises(SystemExit) as info:
            main()
        assert info.value.code == EXIT_USAGE

"""Command line entry point: ``depcol check`` and ``depcol gen-base``.

Exit codes: 0 no violation at or above ``--fail-on``; 1 such violations
exist; 2 usage, model, or extraction errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from .diagnostics import Diagnostic, has_errors, warning
from .engine import Checker, EngineConfig, Property
from .model import Severity
from .parser import DepcolSyntaxError, parse_model
from .report import build_report, render_json, render_text
from .validation import validate_model
from .workspace import build_dependency_graph, generate_bases, scan_workspace

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2

DEFAULT_CHOICES = {
    "allowed": Property.ALLOWED,
    "forbidden-critical": Property.CRITICAL,
    "forbidden-error": Property.ERROR,
    "forbidden-warning": Property.WARN_FORBIDDEN,
}


@dataclass
class RunConfig:
    model_path: str | None = None
    workspace_roots: list[str] = field(default_factory=list)
    format: str = "text"
    fail_on: Severity = Severity.WARNING
    include_optional: bool = True
    default_property: Property = Property.ALLOWED
    plugin_filter: str | None = None


def _emit(diagnostics: Sequence[Diagnostic], stream: TextIO) -> None:
    for diag in diagnostics:
        print(diag, file=stream)


def run_check(cfg: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if not cfg.model_path or not cfg.workspace_roots:
        print("depcol: check needs --model and at least one --workspace", file=stderr)
        return EXIT_ERROR
    try:
        text = Path(cfg.model_path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"depcol: cannot read model {cfg.model_path}: {exc}", file=stderr)
        return EXIT_ERROR
    try:
        model = parse_model(text, cfg.model_path)
    except DepcolSyntaxError as exc:
        _emit(exc.diagnostics, stderr)
        return EXIT_ERROR
    diagnostics = validate_model(model)
    if has_errors(diagnostics):
        _emit(diagnostics, stderr)
        return EXIT_ERROR

    ws, scan_diags = scan_workspace(cfg.workspace_roots)
    diagnostics += scan_diags
    extraction_failed = has_errors(scan_diags)
    graph, graph_diags = build_dependency_graph(ws, cfg.include_optional, model.plugin_base.entries)
    diagnostics += graph_diags
    if model.plugin_base.declared:
        base = frozenset(model.plugin_base.entries)
        diagnostics += [
            warning(
                "W-PLUGIN-NOT-IN-BASE",
                f"workspace plugin {name} is not in the plugin base; only the default rule and "
                f"group-level constraints can apply to it",
                model.plugin_base.location,
            )
            for name in ws.plugins
            if name not in base
        ]

    checker = Checker(model, ws, graph, EngineConfig(cfg.default_property, cfg.include_optional))
    diagnostics += checker.vacuous_constraints()
    if cfg.plugin_filter is not None:
        if cfg.plugin_filter not in graph:
            _emit(diagnostics, stderr)
            print(f"depcol: plugin {cfg.plugin_filter} not found in the workspace", file=stderr)
            return EXIT_ERROR
        results = {cfg.plugin_filter: checker.evaluate_plugin(cfg.plugin_filter)}
    else:
        results = checker.evaluate_all()
    diagnostics += checker.resolver.diagnostics

    report = build_report(results, model, ws, diagnostics)
    if cfg.format == "json":
        print(render_json(report), file=stdout)
    else:
        stdout.write(render_text(report, include_diagnostics=False))
    _emit(diagnostics, stderr)
    if extraction_failed:
        return EXIT_ERROR
    return EXIT_VIOLATIONS if report.fails(cfg.fail_on) else EXIT_OK


def run_gen_base(cfg: RunConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if not cfg.workspace_roots:
        print("depcol: gen-base needs at least one --workspace", file=stderr)
        return EXIT_ERROR
    ws, diagnostics = scan_workspace(cfg.workspace_roots)
    _emit(diagnostics, stderr)
    if has_errors(diagnostics):
        return EXIT_ERROR
    stdout.write(generate_bases(ws))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    env_format = os.environ.get("DEPCOL_FORMAT", "text")
    parser = argparse.ArgumentParser(prog="depcol", description="Check plugin dependencies against a DepCoL model.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="report dependency violations")
    check.add_argument("--model", required=True, help="path to the .depcol model")
    check.add_argument("--workspace", action="append", required=True, help="workspace root (repeatable)")
    check.add_argument("--plugin", help="check only the dependencies of this plugin")
    check.add_argument("--format", choices=("text", "json"), default=env_format)
    check.add_argument("--fail-on", choices=[s.value for s in Severity], default="warning")
    check.add_argument("--no-optional-deps", action="store_true", help="ignore resolution:=optional requirements")
    check.add_argument("--default", choices=list(DEFAULT_CHOICES), default="allowed", dest="default_property")

    gen = sub.add_parser("gen-base", help="print feature and plugin bases for a workspace")
    gen.add_argument("--workspace", action="append", required=True, help="workspace root (repeatable)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    env_format = os.environ.get("DEPCOL_FORMAT")
    if env_format is not None and env_format not in ("text", "json"):
        print(f"depcol: DEPCOL_FORMAT must be 'text' or 'json', got {env_format!r}", file=sys.stderr)
        return EXIT_ERROR
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.command == "gen-base":
        return run_gen_base(RunConfig(workspace_roots=args.workspace))
    cfg = RunConfig(
        model_path=args.model,
        workspace_roots=args.workspace,
        format=args.format,
        fail_on=Severity(args.fail_on),
        include_optional=not args.no_optional_deps,
        default_property=DEFAULT_CHOICES[args.default_property],
        plugin_filter=args.plugin,
    )
    return run_check(cfg)


if __name__ == "__main__":
    sys.exit(main())

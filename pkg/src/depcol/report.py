"""Severity-grouped violation reports in text and JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .diagnostics import Diagnostic
from .engine import PluginPair, PluginResult, Property, RefinementEvent, Verdict
from .model import ConstraintStatement, DependencyModel, ElementKind, ElementRef, Severity
from .workspace import Workspace

SEVERITY_ORDER = (Severity.CRITICAL, Severity.ERROR, Severity.WARNING)
NO_VIOLATIONS = "No dependency violations found."


@dataclass(frozen=True)
class ViolationMessage:
    severity: Severity
    verb: str
    subject: ElementRef
    target: ElementRef
    pairs: tuple[PluginPair, ...]
    constraint: ConstraintStatement | None = None
    source_paths: tuple[str, ...] = ()

    @property
    def violating_plugins(self) -> list[str]:
        """Concrete plugins behind a feature- or group-level message, else empty."""
        if self.target.kind is not ElementKind.PLUGIN:
            return list(dict.fromkeys(p.target for p in self.pairs))
        if self.subject.kind is not ElementKind.PLUGIN:
            return list(dict.fromkeys(p.source for p in self.pairs))
        return []

    @property
    def text(self) -> str:
        suffix = "" if self.constraint is not None else " by default"
        sentence = f"Dependency from {self.subject} to {self.target} is {self.verb}{suffix}."
        plugins = self.violating_plugins
        if plugins:
            sentence += f" Violating plugins: [{', '.join(plugins)}]."
        return sentence

    def to_json(self) -> dict:
        return {
            "severity": self.severity.value,
            "verb": self.verb,
            "source": self.subject.to_json(),
            "target": self.target.to_json(),
            "violatingPairs": [{"source": p.source, "target": p.target} for p in self.pairs],
            "constraintOrdinal": self.constraint.ordinal if self.constraint is not None else None,
            "constraintLocation": self.constraint.location.to_json() if self.constraint is not None else None,
        }


def _verb(prop: Property) -> str:
    return "tolerated" if prop is Property.WARN_TOLERATED else "forbidden"


def _sort_key(msg: ViolationMessage):
    ordinal = msg.constraint.ordinal if msg.constraint is not None else float("inf")
    return (-msg.severity.rank, ordinal, msg.pairs[0].source, msg.pairs[0].target)


def aggregate_messages(
    results: Mapping[str, PluginResult],
    model: DependencyModel | None = None,
    ws: Workspace | None = None,
) -> list[ViolationMessage]:
    """Merge verdicts that stem from the same constraint into one message.

    Verdicts from the default rule have no constraint and each become a
    plugin-to-plugin message of their own. Within a message, pairs are
    ordered by source plugin and then by manifest order.
    """
    by_constraint: dict[int, list[Verdict]] = {}
    defaults: list[Verdict] = []
    for name in sorted(results):
        for verdict in results[name].violations():
            if verdict.constraint is None:
                defaults.append(verdict)
            else:
                by_constraint.setdefault(verdict.constraint.ordinal, []).append(verdict)

    def paths(pairs: Iterable[PluginPair]) -> tuple[str, ...]:
        if ws is None:
            return ()
        sources = dict.fromkeys(p.source for p in pairs)
        return tuple(ws.plugins[s].source_path for s in sources if s in ws.plugins)

    messages = []
    for verdicts in by_constraint.values():
        stmt = verdicts[0].constraint
        pairs = tuple(v.pair for v in verdicts)
        prop = verdicts[0].property
        messages.append(
            ViolationMessage(prop.severity, _verb(prop), stmt.subject, stmt.target, pairs, stmt, paths(pairs))
        )
    for verdict in defaults:
        pair = verdict.pair
        messages.append(
            ViolationMessage(
                verdict.property.severity,
                "forbidden",
                ElementRef(ElementKind.PLUGIN, pair.source),
                ElementRef(ElementKind.PLUGIN, pair.target),
                (pair,),
                None,
                paths((pair,)),
            )
        )
    messages.sort(key=_sort_key)
    return messages


def merge_refinements(results: Mapping[str, PluginResult]) -> list[RefinementEvent]:
    """Combine per-plugin refinement events sharing refiner and refined constraint."""
    merged: dict[tuple[int, int], tuple[ConstraintStatement, ConstraintStatement, list[PluginPair]]] = {}
    for name in sorted(results):
        for event in results[name].refinements:
            key = (event.refiner_ordinal, event.refined_ordinal)
            entry = merged.setdefault(key, (event.refiner, event.refined, []))
            entry[2].extend(event.witness_pairs)
    return [
        RefinementEvent(refiner, refined, tuple(pairs))
        for (_, _), (refiner, refined, pairs) in sorted(merged.items(), key=lambda kv: (-kv[0][0], -kv[0][1]))
    ]


@dataclass
class CheckReport:
    messages: list[ViolationMessage] = field(default_factory=list)
    refinements: list[RefinementEvent] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def messages_by_severity(self) -> dict[Severity, list[ViolationMessage]]:
        grouped: dict[Severity, list[ViolationMessage]] = {s: [] for s in SEVERITY_ORDER}
        for msg in self.messages:
            grouped[msg.severity].append(msg)
        return grouped

    @property
    def summary(self) -> dict[str, int]:
        return {s.value: len(msgs) for s, msgs in self.messages_by_severity.items()}

    def worst_severity(self) -> Severity | None:
        for severity in SEVERITY_ORDER:
            if self.messages_by_severity[severity]:
                return severity
        return None

    def fails(self, fail_on: Severity) -> bool:
        return any(m.severity.rank >= fail_on.rank for m in self.messages)


def build_report(
    results: Mapping[str, PluginResult],
    model: DependencyModel | None = None,
    ws: Workspace | None = None,
    diagnostics: Iterable[Diagnostic] = (),
) -> CheckReport:
    return CheckReport(aggregate_messages(results, model, ws), merge_refinements(results), list(diagnostics))


def _describe(stmt: ConstraintStatement) -> str:
    loc = stmt.location
    return f"#{stmt.ordinal} {stmt.describe()} (line {loc.line})"


def render_text(report: CheckReport, include_diagnostics: bool = True) -> str:
    lines: list[str] = []
    for severity, msgs in report.messages_by_severity.items():
        if not msgs:
            continue
        lines.append(f"Dependency violations with severity {severity.value} ({len(msgs)})")
        for msg in msgs:
            lines.append(f"  {msg.text}")
            lines.extend(f"    {path}" for path in msg.source_paths)
    if not lines:
        lines.append(NO_VIOLATIONS)
    if report.refinements:
        lines.append(f"Refinements ({len(report.refinements)})")
        for event in report.refinements:
            pairs = ", ".join(str(p) for p in event.witness_pairs)
            lines.append(f"  {_describe(event.refiner)} refines {_describe(event.refined)} on {pairs}")
    if include_diagnostics and report.diagnostics:
        lines.append(f"Diagnostics ({len(report.diagnostics)})")
        lines.extend(f"  {d}" for d in report.diagnostics)
    return "\n".join(lines) + "\n"


def report_to_json(report: CheckReport) -> dict:
    return {
        "summary": report.summary,
        "violations": [m.to_json() for m in report.messages],
        "refinements": [
            {
                "refinerOrdinal": e.refiner_ordinal,
                "refinedOrdinal": e.refined_ordinal,
                "pairs": [{"source": p.source, "target": p.target} for p in e.witness_pairs],
            }
            for e in report.refinements
        ],
        "diagnostics": [d.to_json() for d in report.diagnostics],
    }


def render_json(report: CheckReport) -> str:
    return json.dumps(report_to_json(report), separators=(",", ":"))

"""Verdicts for actual dependency edges.

A constraint governs every pair (x, y) with x among the subject's plugins and y
among the target's plugins; a constraint written later refines every earlier
one on the intersection of their pair sets. :func:`evaluate_plugin` realizes
this by walking constraints from the last to the first and keeping the first
verdict found for each edge, logging every collision as a refinement.
:func:`oracle_evaluate` computes the same mapping forward and exists to
cross-check it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .diagnostics import Diagnostic, warning
from .groups import Resolver
from .model import ConstraintStatement, DependencyModel, Severity, StatementKind
from .workspace import DependencyGraph, Workspace


class Property(str, enum.Enum):
    ALLOWED = "allowed"
    CRITICAL = "critical"
    ERROR = "error"
    WARN_FORBIDDEN = "warning-forbidden"
    WARN_TOLERATED = "warning-tolerated"

    @property
    def severity(self) -> Severity | None:
        return _SEVERITY_OF[self]

    @property
    def partition(self) -> str:
        """Name of the relation holding this property: allowed, critical, error or warning."""
        severity = _SEVERITY_OF[self]
        return "allowed" if severity is None else severity.value

    @property
    def is_violation(self) -> bool:
        return self is not Property.ALLOWED


_SEVERITY_OF = {
    Property.ALLOWED: None,
    Property.CRITICAL: Severity.CRITICAL,
    Property.ERROR: Severity.ERROR,
    Property.WARN_FORBIDDEN: Severity.WARNING,
    Property.WARN_TOLERATED: Severity.WARNING,
}

PARTITIONS = ("allowed", "critical", "error", "warning")


class PluginPair(NamedTuple):
    source: str
    target: str

    def __str__(self) -> str:
        return f"({self.source}, {self.target})"


def property_of(stmt: ConstraintStatement) -> Property:
    if stmt.kind is StatementKind.ALLOW:
        return Property.ALLOWED
    if stmt.kind is StatementKind.TOLERATE:
        return Property.WARN_TOLERATED
    return {
        None: Property.ERROR,
        Severity.CRITICAL: Property.CRITICAL,
        Severity.ERROR: Property.ERROR,
        Severity.WARNING: Property.WARN_FORBIDDEN,
    }[stmt.severity]


def pairs_of(stmt: ConstraintStatement, resolver: Resolver) -> frozenset[PluginPair]:
    """All plugin pairs a constraint governs, regardless of actual edges."""
    sources = resolver.plugins_of(stmt.subject)
    targets = resolver.plugins_of(stmt.target)
    return frozenset(PluginPair(x, y) for x in sources for y in targets)


@dataclass(frozen=True)
class EngineConfig:
    default_property: Property = Property.ALLOWED
    include_optional: bool = True

    def __post_init__(self) -> None:
        if self.default_property is Property.WARN_TOLERATED:
            raise ValueError("the default property cannot be 'tolerated'; tolerating is an explicit statement")


@dataclass(frozen=True)
class Verdict:
    pair: PluginPair
    property: Property
    constraint: ConstraintStatement | None = None

    @property
    def is_default(self) -> bool:
        return self.constraint is None


class VerdictRelation:
    """Disjoint allowed/critical/error/warning relations over edge pairs.

    Built by adding verdicts one at a time; a pair can be added only once,
    which is what keeps the partitions disjoint.
    """

    def __init__(self) -> None:
        self._by_pair: dict[PluginPair, Verdict] = {}

    def __contains__(self, pair: object) -> bool:
        return pair in self._by_pair

    def __len__(self) -> int:
        return len(self._by_pair)

    def __iter__(self):
        return iter(self._by_pair.values())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VerdictRelation) and self._by_pair == other._by_pair

    def __repr__(self) -> str:
        return f"VerdictRelation({list(self._by_pair.values())!r})"

    def get(self, pair: PluginPair) -> Verdict | None:
        return self._by_pair.get(pair)

    def add(self, verdict: Verdict) -> bool:
        if verdict.pair in self._by_pair:
            return False
        self._by_pair[verdict.pair] = verdict
        return True

    def partition(self, name: str) -> list[Verdict]:
        if name not in PARTITIONS:
            raise KeyError(name)
        return [v for v in self._by_pair.values() if v.property.partition == name]

    def pairs(self, name: str) -> frozenset[PluginPair]:
        return frozenset(v.pair for v in self.partition(name))


@dataclass(frozen=True)
class RefinementEvent:
    """``refiner`` was defined after ``refined`` and overrides it on ``witness_pairs``."""

    refiner: ConstraintStatement
    refined: ConstraintStatement
    witness_pairs: tuple[PluginPair, ...]

    @property
    def refiner_ordinal(self) -> int:
        return self.refiner.ordinal

    @property
    def refined_ordinal(self) -> int:
        return self.refined.ordinal


@dataclass
class PluginResult:
    plugin: str
    relation: VerdictRelation
    refinements: list[RefinementEvent]
    # edges no constraint covers, in manifest order
    uncovered: tuple[PluginPair, ...] = ()
    default_property: Property = Property.ALLOWED
    edges: tuple[str, ...] = ()

    def effective_property(self, pair: PluginPair) -> Property:
        verdict = self.relation.get(pair)
        return verdict.property if verdict is not None else self.default_property

    def violations(self) -> list[Verdict]:
        """Non-allowed verdicts in manifest edge order.

        Edges no constraint covers are included, without provenance, when the
        default property is itself a violation.
        """
        found = []
        for target in self.edges:
            pair = PluginPair(self.plugin, target)
            verdict = self.relation.get(pair)
            if verdict is None:
                verdict = Verdict(pair, self.default_property)
            if verdict.property.is_violation:
                found.append(verdict)
        return found


@dataclass
class Checker:
    """Evaluates plugins against one model, workspace and graph.

    Group resolution is shared across all plugins checked through the same
    instance.
    """

    model: DependencyModel
    ws: Workspace
    graph: DependencyGraph
    config: EngineConfig = field(default_factory=EngineConfig)
    resolver: Resolver | None = None

    def __post_init__(self) -> None:
        if self.resolver is None:
            self.resolver = Resolver(self.model, self.ws)
        self._reverse = tuple(reversed(self.model.statements))

    def evaluate_plugin(self, plugin: str) -> PluginResult:
        if plugin not in self.graph:
            raise KeyError(f"plugin {plugin} is not part of the dependency graph")
        edges = self.graph.targets(plugin)
        relation = VerdictRelation()
        events: dict[tuple[int, int], tuple[ConstraintStatement, ConstraintStatement, list[PluginPair]]] = {}
        if edges:
            for stmt in self._reverse:
                if plugin not in self.resolver.plugins_of(stmt.subject):
                    continue
                targets = self.resolver.plugins_of(stmt.target)
                prop = property_of(stmt)
                for target in edges:
                    if target not in targets:
                        continue
                    pair = PluginPair(plugin, target)
                    stored = relation.get(pair)
                    if stored is None:
                        relation.add(Verdict(pair, prop, stmt))
                        continue
                    key = (stored.constraint.ordinal, stmt.ordinal)
                    entry = events.get(key)
                    if entry is None:
                        events[key] = (stored.constraint, stmt, [pair])
                    elif pair not in entry[2]:
                        entry[2].append(pair)
        refinements = [RefinementEvent(refiner, refined, tuple(pairs)) for refiner, refined, pairs in events.values()]
        uncovered = tuple(PluginPair(plugin, t) for t in edges if PluginPair(plugin, t) not in relation)
        return PluginResult(plugin, relation, refinements, uncovered, self.config.default_property, edges)

    def evaluate_all(self) -> dict[str, PluginResult]:
        return {plugin: self.evaluate_plugin(plugin) for plugin in sorted(self.graph.edges)}

    def vacuous_constraints(self) -> list[Diagnostic]:
        """``W-VACUOUS-CONSTRAINT`` for statements whose subject or target denotes no plugins."""
        found = []
        for stmt in self.model.statements:
            for side, ref in (("subject", stmt.subject), ("target", stmt.target)):
                if not self.resolver.plugins_of(ref):
                    found.append(
                        warning(
                            "W-VACUOUS-CONSTRAINT",
                            f"{side} {ref} of '{stmt.kind.value} dependency to {stmt.target}' denotes no plugins; "
                            f"the constraint has no effect",
                            stmt.location,
                        )
                    )
                    break
        return found


def evaluate_plugin(
    plugin: str,
    model: DependencyModel,
    ws: Workspace,
    graph: DependencyGraph,
    config: EngineConfig | None = None,
) -> PluginResult:
    return Checker(model, ws, graph, config or EngineConfig()).evaluate_plugin(plugin)


def evaluate_all(
    model: DependencyModel,
    ws: Workspace,
    graph: DependencyGraph,
    config: EngineConfig | None = None,
) -> dict[str, PluginResult]:
    return Checker(model, ws, graph, config or EngineConfig()).evaluate_all()


def oracle_evaluate(
    model: DependencyModel,
    ws: Workspace,
    graph: DependencyGraph,
    config: EngineConfig | None = None,
) -> dict[PluginPair, Property]:
    """Reference semantics: the last constraint whose pair set holds an edge decides it."""
    config = config or EngineConfig()
    resolver = Resolver(model, ws)
    governed = [(pairs_of(stmt, resolver), property_of(stmt)) for stmt in model.statements]
    mapping: dict[PluginPair, Property] = {}
    for source, target in graph.pairs():
        pair = PluginPair(source, target)
        prop = config.default_property
        for pairs, stmt_prop in governed:
            if pair in pairs:
                prop = stmt_prop
        mapping[pair] = prop
    return mapping


def effective_properties(results: Mapping[str, PluginResult]) -> dict[PluginPair, Property]:
    """Flatten per-plugin results into one property per graph edge."""
    mapping: dict[PluginPair, Property] = {}
    for result in results.values():
        for verdict in result.relation:
            mapping[verdict.pair] = verdict.property
        for pair in result.uncovered:
            mapping[pair] = result.default_property
    return mapping

"""Dependency constraint checking for plugin-based systems.

Typical use::

    model = depcol.parse_model(text, "arch.depcol")
    problems = depcol.validate_model(model)
    ws, _ = depcol.scan_workspace(["workspace/"])
    graph, _ = depcol.build_dependency_graph(ws, plugin_base=model.plugin_base.entries)
    results = depcol.evaluate_all(model, ws, graph)
    print(depcol.render_text(depcol.build_report(results, model, ws)))
"""

from .diagnostics import Diagnostic, Level, SourceLocation
from .engine import (
    Checker,
    EngineConfig,
    PluginPair,
    PluginResult,
    Property,
    RefinementEvent,
    Verdict,
    VerdictRelation,
    effective_properties,
    evaluate_all,
    evaluate_plugin,
    oracle_evaluate,
    pairs_of,
    property_of,
)
from .groups import (
    CompiledPattern,
    Resolver,
    ResolutionError,
    Universe,
    compile_pattern,
    plugins_of,
    resolve_feature_group,
    resolve_plugin_group,
)
from .model import (
    ALL_GROUP,
    BaseDecl,
    ConstraintBlock,
    ConstraintStatement,
    DependencyModel,
    ElementKind,
    ElementRef,
    GroupDecl,
    GroupMember,
    NamePattern,
    Severity,
    StatementKind,
)
from .parser import DepcolSyntaxError, parse_model
from .report import (
    CheckReport,
    ViolationMessage,
    aggregate_messages,
    build_report,
    render_json,
    render_text,
)
from .validation import is_valid, validate_model
from .workspace import (
    DependencyGraph,
    ExtractionError,
    FeatureDefinition,
    PluginManifest,
    RequiredBundle,
    Workspace,
    build_dependency_graph,
    generate_bases,
    parse_feature_xml,
    parse_manifest,
    scan_workspace,
)

__version__ = "0.1.0"

"""Exit criteria. Each test checks one criterion; the run ends with a
pass/fail line per criterion (see conftest.py)."""

import io
import random
import string
import time

import pytest

from depcol import (
    ElementKind,
    PluginPair,
    Property,
    Resolver,
    Workspace,
    build_dependency_graph,
    effective_properties,
    evaluate_all,
    generate_bases,
    oracle_evaluate,
    pairs_of,
    parse_manifest,
    parse_model,
    resolve_feature_group,
    validate_model,
)
from depcol.cli import RunConfig, run_check
from depcol.engine import EngineConfig
from depcol.report import CheckReport, ViolationMessage, aggregate_messages, build_report, render_text
from depcol.model import ElementRef, Severity
from depcol.workspace import RequiredBundle

from scenarios import (
    GOLDEN_MODEL,
    GOLDEN_PLUGINS,
    FEATURE_GROUPS_TEXT,
    GROUP_FEATURE_BASE,
    SEVERITY_RULES_TEXT,
    P1_MANIFEST,
    random_instance,
    write_workspace,
)

SUITE_SIZE = 1000


@pytest.fixture(scope="module")
def random_suite():
    suite = []
    for seed in range(SUITE_SIZE):
        rng = random.Random(seed)
        text, requires, features = random_instance(rng)
        model = parse_model(text, f"random-{seed}.depcol")
        assert not any(d.is_error for d in validate_model(model))
        ws = Workspace.from_dicts(requires, features)
        include_optional = rng.random() < 0.7
        default = rng.choice([Property.ALLOWED, Property.ALLOWED, Property.CRITICAL, Property.ERROR, Property.WARN_FORBIDDEN])
        graph, _ = build_dependency_graph(ws, include_optional, model.plugin_base.entries)
        suite.append((model, ws, graph, EngineConfig(default, include_optional)))
    return suite


def test_ac1_golden_fixture(tmp_path):
    """AC1 golden worked example: one tolerated warning, one error, p4.ui allowed, exit 1, < 1 s"""
    ws = write_workspace(tmp_path / "ws", {p: [] for p in GOLDEN_PLUGINS})
    (ws / "p1" / "META-INF" / "MANIFEST.MF").write_bytes(P1_MANIFEST)
    model_path = tmp_path / "golden.depcol"
    model_path.write_text(GOLDEN_MODEL)
    out, err = io.StringIO(), io.StringIO()
    start = time.perf_counter()
    code = run_check(RunConfig(str(model_path), [str(ws)]), out, err)
    elapsed = time.perf_counter() - start
    assert code == 1
    assert elapsed < 1.0
    warning_lines = [l for l in out.getvalue().splitlines() if l.startswith("Dependency violations")]
    assert warning_lines == [
        "Dependency violations with severity error (1)",
        "Dependency violations with severity warning (1)",
    ]

    model = parse_model(GOLDEN_MODEL)
    wsm = Workspace.from_dicts({p: (["p4.ui", "p5.ui", "p6.i18n"] if p == "p1" else []) for p in GOLDEN_PLUGINS})
    graph, _ = build_dependency_graph(wsm, plugin_base=model.plugin_base.entries)
    results = evaluate_all(model, wsm, graph)
    rel = results["p1"].relation
    assert rel.pairs("warning") == {PluginPair("p1", "p5.ui")}
    assert rel.get(PluginPair("p1", "p5.ui")).property is Property.WARN_TOLERATED
    assert rel.pairs("error") == {PluginPair("p1", "p6.i18n")}
    assert rel.pairs("allowed") == {PluginPair("p1", "p4.ui")}
    assert rel.pairs("critical") == frozenset()
    messages = aggregate_messages(results, model, wsm)
    assert [(m.severity, m.verb, m.pairs) for m in messages] == [
        (Severity.ERROR, "forbidden", (PluginPair("p1", "p6.i18n"),)),
        (Severity.WARNING, "tolerated", (PluginPair("p1", "p5.ui"),)),
    ]


def test_ac2_group_resolution():
    """AC2 feature group resolution (list, wildcard, combined): exact set equality"""
    model = parse_model("declare featurebase {\n" + "".join(f"  {f};\n" for f in GROUP_FEATURE_BASE) + "}\n" + FEATURE_GROUPS_TEXT)
    assert validate_model(model) == []
    assert resolve_feature_group("fgListFeatures", model) == {"f1", "f2"}
    assert resolve_feature_group("fgRegExp", model) == {"fs.ui.x", "fs.core.y"}
    assert resolve_feature_group("fgCombined", model) == set(GROUP_FEATURE_BASE)


def test_ac3_severities():
    """AC3 forbid/tolerate severities: Critical, WarnForbidden and WarnTolerated with forbidden/tolerated verbs"""
    decls = (
        "declare featurebase { f1; f2; f3; fs.ui.x; fs.core.y; fA; fB; }\n"
        "declare pluginbase { p1; q1; q2; u1; c1; a1; b1; }\n"
        "declare featuregroup fg2 { fA; fB; }\n"
    )
    model = parse_model(decls + FEATURE_GROUPS_TEXT + SEVERITY_RULES_TEXT)
    assert validate_model(model) == []
    ws = Workspace.from_dicts(
        {"p1": ["q2", "a1", "b1"], "q1": ["u1", "c1"], "q2": [], "u1": [], "c1": [], "a1": [], "b1": []},
        {"f1": ["q1"], "f2": ["q2"], "fs.ui.x": ["u1"], "fs.core.y": ["c1"], "fA": ["a1"], "fB": ["b1"]},
    )
    graph, _ = build_dependency_graph(ws, plugin_base=model.plugin_base.entries)
    results = evaluate_all(model, ws, graph)
    assert effective_properties(results) == {
        PluginPair("p1", "q2"): Property.CRITICAL,
        PluginPair("p1", "a1"): Property.WARN_FORBIDDEN,
        PluginPair("p1", "b1"): Property.WARN_FORBIDDEN,
        PluginPair("q1", "u1"): Property.WARN_TOLERATED,
        PluginPair("q1", "c1"): Property.WARN_TOLERATED,
    }
    messages = aggregate_messages(results, model, ws)
    assert [(m.severity, m.verb, m.target.name) for m in messages] == [
        (Severity.CRITICAL, "forbidden", "f2"),
        (Severity.WARNING, "forbidden", "fg2"),
        (Severity.WARNING, "tolerated", "fgRegExp"),
    ]


def test_ac4_report_format():
    """AC4 report format: severity headers with counts and verbatim feature-level aggregation"""
    def msg(severity, i):
        return ViolationMessage(
            severity, "forbidden", ElementRef(ElementKind.PLUGIN, f"s{i}"), ElementRef(ElementKind.PLUGIN, f"t{i}"),
            (PluginPair(f"s{i}", f"t{i}"),),
        )

    synthetic = CheckReport(
        [msg(Severity.CRITICAL, i) for i in range(2)] + [msg(Severity.ERROR, i) for i in range(10)] + [msg(Severity.WARNING, 0)]
    )
    headers = [l for l in render_text(synthetic).splitlines() if not l.startswith(" ")]
    assert headers == [
        "Dependency violations with severity critical (2)",
        "Dependency violations with severity error (10)",
        "Dependency violations with severity warning (1)",
    ]

    model = parse_model(
        "declare featurebase { f.ui; }\ndeclare pluginbase { p1.core; p.script.ui; p.bb.ui; }\n"
        "plugin p1.core {\n  [critical] forbid dependency to feature f.ui;\n}\n"
    )
    ws = Workspace.from_dicts(
        {"p1.core": ["p.script.ui", "p.bb.ui"], "p.script.ui": [], "p.bb.ui": []},
        {"f.ui": ["p.script.ui", "p.bb.ui"]},
    )
    graph, _ = build_dependency_graph(ws, plugin_base=model.plugin_base.entries)
    text = render_text(build_report(evaluate_all(model, ws, graph), model, ws))
    assert "Violating plugins: [p.script.ui, p.bb.ui]" in text
    assert "  Dependency from plugin p1.core to feature f.ui is forbidden. Violating plugins: [p.script.ui, p.bb.ui].\n" in text


def test_ac5_oracle_equivalence(random_suite):
    """AC5 oracle equivalence over 1000 seeded random instances: zero mismatches"""
    mismatches = edges = 0
    for model, ws, graph, cfg in random_suite:
        effective = effective_properties(evaluate_all(model, ws, graph, cfg))
        oracle = oracle_evaluate(model, ws, graph, cfg)
        assert set(effective) == set(oracle) == set(PluginPair(*p) for p in graph.pairs())
        edges += len(oracle)
        mismatches += sum(effective[p] is not oracle[p] for p in oracle)
    print(f"AC5: {len(random_suite)} instances, {edges} edges, {mismatches} mismatches")
    assert mismatches == 0


def test_ac6_structural_invariants(random_suite):
    """AC6 structural invariants on the random suite: disjointness, edge restriction, refinement soundness"""
    violations = events = 0
    for model, ws, graph, cfg in random_suite:
        resolver = Resolver(model, ws)
        by_ordinal = {s.ordinal: s for s in model.statements}
        pp = {o: pairs_of(s, resolver) for o, s in by_ordinal.items()}
        for result in evaluate_all(model, ws, graph, cfg).values():
            parts = [result.relation.pairs(n) for n in ("allowed", "critical", "error", "warning")]
            violations += sum(len(a & b) for i, a in enumerate(parts) for b in parts[i + 1:])
            violations += sum(not graph.has_edge(*v.pair) for v in result.relation)
            for event in result.refinements:
                events += 1
                witness = set(event.witness_pairs)
                ok = (
                    event.refiner_ordinal > event.refined_ordinal
                    and witness
                    and witness <= pp[event.refiner_ordinal] & pp[event.refined_ordinal]
                    and all(graph.has_edge(*p) for p in witness)
                )
                violations += not ok
    print(f"AC6: {events} refinement events checked, {violations} violations")
    assert events > 0
    assert violations == 0


def test_ac7_base_round_trip():
    """AC7 base round-trip for 100 random workspaces: zero errors, exact name sets"""
    rng = random.Random(7)
    alphabet = string.ascii_letters + string.digits + "._-"
    first = string.ascii_letters + string.digits + "_"

    def name():
        return rng.choice(first) + "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))

    for _ in range(100):
        plugins = {name() for _ in range(rng.randint(0, 30))}
        features = {name() for _ in range(rng.randint(0, 8))}
        ws = Workspace.from_dicts({p: [] for p in plugins}, {f: rng.sample(sorted(plugins), min(2, len(plugins))) for f in features})
        model = parse_model(generate_bases(ws))
        assert not any(d.is_error for d in validate_model(model))
        assert set(model.plugin_base.entries) == plugins
        assert set(model.feature_base.entries) == features


def _scale_fixture(root):
    rng = random.Random(800)
    layers = 8
    plugins = [f"com.acme.l{i % layers}.m{i}" + (".ui" if i % 5 == 0 else "") for i in range(800)]
    requires = {p: rng.sample(plugins, 5) for p in plugins}
    features = {f"feat{j}": plugins[j * 8:(j + 1) * 8] for j in range(100)}
    write_workspace(root / "ws", requires, features)

    lines = ["declare featurebase {"] + [f"  {f};" for f in features] + ["}"]
    lines += ["declare pluginbase {"] + [f"  {p};" for p in plugins] + ["}"]
    for i in range(layers):
        lines += [f"declare plugingroup layer{i} {{", f"  com.acme.l{i}.*;", "}"]
    lines += ["declare plugingroup uis {", "  *.ui;", "}"]
    for j in range(10):
        lines += [f"declare featuregroup fg{j} {{"] + [f"  feat{k};" for k in range(j * 10, j * 10 + 10)] + ["}"]
    refs = (
        [f"plugingroup layer{i}" for i in range(layers)]
        + ["plugingroup uis", "plugingroup ALL"]
        + [f"featuregroup fg{j}" for j in range(10)]
        + [f"feature {f}" for f in rng.sample(sorted(features), 20)]
        + [f"plugin {p}" for p in rng.sample(plugins, 40)]
    )
    for _ in range(200):
        kind = rng.choice(["[critical] forbid", "forbid", "[warning] forbid", "tolerate", "allow"])
        lines += [f"{rng.choice(refs)} {{", f"  {kind} dependency to {rng.choice(refs)};", "}"]
    model_path = root / "scale.depcol"
    model_path.write_text("\n".join(lines) + "\n")
    return model_path, root / "ws", plugins


def test_ac8_scale(tmp_path):
    """AC8 scale: 800 plugins / 100 features / 200 constraints, check < 2 s and check --plugin < 200 ms"""
    model_path, ws, plugins = _scale_fixture(tmp_path)
    assert len(parse_model(model_path.read_text()).statements) == 200

    start = time.perf_counter()
    code = run_check(RunConfig(str(model_path), [str(ws)]), io.StringIO(), io.StringIO())
    full = time.perf_counter() - start
    assert code in (0, 1)

    start = time.perf_counter()
    code = run_check(RunConfig(str(model_path), [str(ws)], plugin_filter=plugins[17]), io.StringIO(), io.StringIO())
    single = time.perf_counter() - start
    assert code in (0, 1)
    print(f"AC8: check {full * 1000:.0f} ms, check --plugin {single * 1000:.0f} ms")
    assert full < 2.0
    assert single < 0.2


def test_ac9_manifest_fixtures():
    """AC9 manifest fixtures: continuations, singleton stripping, quoted ranges, optional resolution"""
    m = parse_manifest(P1_MANIFEST)
    assert m.symbolic_name == "p1"
    assert m.required_bundles == (
        RequiredBundle("p4.ui", False),
        RequiredBundle("p5.ui", True),
        RequiredBundle("p6.i18n", False),
    )
    assert parse_manifest(b"Bundle-SymbolicName: p2\n").required_bundles == ()
    ranged = parse_manifest(b'Bundle-SymbolicName: x\nRequire-Bundle: a;bundle-version="[1.0,2.0)"\n')
    assert ranged.required_bundles == (RequiredBundle("a", False),)

from hypothesis import given
from hypothesis import strategies as st

from depcol import (
    ElementKind,
    ElementRef,
    Level,
    NamePattern,
    Resolver,
    Workspace,
    compile_pattern,
    parse_model,
    plugins_of,
    resolve_feature_group,
    resolve_plugin_group,
)

from scenarios import GOLDEN_DECLS, GOLDEN_PLUGINS, FEATURE_GROUPS_TEXT, GROUP_FEATURE_BASE, brute_group

GROUPS_MODEL = "declare featurebase {\n" + "".join(f"  {f};\n" for f in GROUP_FEATURE_BASE) + "}\n" + FEATURE_GROUPS_TEXT


def test_pattern_examples():
    ui = compile_pattern("fs.ui.*")
    assert ui.matches("fs.ui.x")
    assert not ui.matches("afs.ui.x")
    assert not ui.matches("fsXuiXx")  # '.' is literal
    assert compile_pattern("p1").matches("p1")
    assert not compile_pattern("p1").matches("p10")
    star = compile_pattern(NamePattern("*"))
    assert all(star.matches(s) for s in ("", "x", "a.b.c"))
    assert compile_pattern("fs.*.core.*").matches("fs.a.b.core.")
    assert compile_pattern("*.ui").matches("p4.ui")


names = st.text(alphabet="ab.-_1", max_size=8)


@given(names)
def test_literal_pattern_matches_only_itself(name):
    if not name:
        return
    assert compile_pattern(name).matches(name)
    assert not compile_pattern(name).matches(name + "x")


@given(st.lists(st.sampled_from(["a", "b", ".", "*"]), max_size=6), names)
def test_pattern_agrees_with_glob(parts, candidate):
    from fnmatch import fnmatchcase

    pattern = "".join(parts)
    assert compile_pattern(pattern).matches(candidate) == fnmatchcase(candidate, pattern)


def test_feature_group_resolution():
    model = parse_model(GROUPS_MODEL)
    assert resolve_feature_group("fgListFeatures", model) == {"f1", "f2"}
    assert resolve_feature_group("fgRegExp", model) == {"fs.ui.x", "fs.core.y"}
    assert resolve_feature_group("fgCombined", model) == set(GROUP_FEATURE_BASE)


def test_empty_group():
    model = parse_model("declare featuregroup g { }")
    assert resolve_feature_group("g", model) == frozenset()


def test_plugin_groups_of_golden_scenario():
    model = parse_model(GOLDEN_DECLS + "declare plugingroup only2 { p2; }")
    assert resolve_plugin_group("ALL", model) == set(GOLDEN_PLUGINS)
    assert resolve_plugin_group("pgUi", model) == {"p4.ui", "p5.ui"}
    assert resolve_plugin_group("only2", model) == {"p2"}


def test_patterns_resolve_against_base_not_workspace():
    model = parse_model("declare pluginbase { a.ui; }\ndeclare plugingroup g { *.ui; }")
    ws = Workspace.from_dicts({"a.ui": (), "b.ui": ()})
    assert plugins_of(ElementRef(ElementKind.PLUGIN_GROUP, "g"), model, ws) == {"a.ui"}


def test_plugins_of_feature_group_unions_features():
    model = parse_model("declare featurebase { fA; fB; }\ndeclare featuregroup fg { fA; fB; }")
    ws = Workspace.from_dicts({}, {"fA": {"m1", "m2"}, "fB": {"m2", "m3"}})
    resolver = Resolver(model, ws)
    assert resolver.plugins_of(ElementRef(ElementKind.FEATURE_GROUP, "fg")) == {"m1", "m2", "m3"}
    assert resolver.plugins_of(ElementRef(ElementKind.PLUGIN, "p1")) == {"p1"}
    assert resolver.diagnostics == []


def test_missing_feature_warns_once():
    model = parse_model("declare featurebase { fX; }\ndeclare featuregroup fg { fX; }")
    resolver = Resolver(model, Workspace())
    assert resolver.plugins_of(ElementRef(ElementKind.FEATURE, "fX")) == frozenset()
    assert resolver.plugins_of(ElementRef(ElementKind.FEATURE_GROUP, "fg")) == frozenset()
    diags = resolver.diagnostics
    assert [(d.code, d.level) for d in diags] == [("W-MISSING-FEATURE", Level.WARNING)]


def test_nesting_flattens():
    model = parse_model(GROUPS_MODEL + "declare featuregroup wrap { featuregroup fgRegExp; }")
    assert resolve_feature_group("wrap", model) == resolve_feature_group("fgRegExp", model)


def test_overlapping_groups_allowed():
    model = parse_model(GROUPS_MODEL + "declare featuregroup other { f1; fs.*; }")
    assert "f1" in resolve_feature_group("other", model) & resolve_feature_group("fgListFeatures", model)


member = st.sampled_from(["f1", "f2", "fs.ui.x", "fs.*", "*.x", "*", "f*", "featuregroup fgRegExp", "featuregroup fgListFeatures"])


@given(st.lists(member, max_size=5), member)
def test_monotone_and_representable(members, extra):
    def model_for(ms):
        body = "".join(f"  {m};\n" for m in ms)
        return parse_model(GROUPS_MODEL + f"declare featuregroup h {{\n{body}}}\n")

    before = model_for(members)
    after = model_for(members + [extra])
    assert resolve_feature_group("h", before) <= resolve_feature_group("h", after)
    # single combined pattern list gives the same set
    assert resolve_feature_group("h", after) == brute_group(after, ElementKind.FEATURE_GROUP, "h")


def test_memoization_is_invisible():
    model = parse_model(GROUPS_MODEL)
    ws = Workspace.from_dicts({}, {f: {f"{f}.plugin"} for f in GROUP_FEATURE_BASE})
    resolver = Resolver(model, ws)
    ref = ElementRef(ElementKind.FEATURE_GROUP, "fgCombined")
    first = resolver.plugins_of(ref)
    assert resolver.plugins_of(ref) == first == Resolver(model, ws).plugins_of(ref)
    assert first == {f"{f}.plugin" for f in GROUP_FEATURE_BASE}

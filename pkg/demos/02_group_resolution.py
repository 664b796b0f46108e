"""Resolving groups, features and plugins to concrete plugin sets."""

# %%
from depcol import ElementKind, ElementRef, Resolver, Workspace, parse_model, resolve_feature_group

model = parse_model(
    """
declare featurebase { f1; f2; f3; fs.ext.a; fs.ui.x; fs.core.y; }
declare featuregroup listed { f1; f2; }
declare featuregroup wildcards { fs.ui.*; fs.core.*; }
declare featuregroup combined {
    f3;
    fs.ext.*;
    featuregroup listed;
    featuregroup wildcards;
}
declare pluginbase { p1; p4.ui; p5.ui; p6.i18n; }
declare plugingroup ui { *.ui; }
"""
)

# %% Groups match names from the bases, `*` standing for any run of characters.
for name in ("listed", "wildcards", "combined"):
    print(name, sorted(resolve_feature_group(name, model)))

# %% Features turn into plugins through the workspace's feature.xml files.
ws = Workspace.from_dicts(
    {"p1": [], "p4.ui": [], "p5.ui": [], "p6.i18n": []},
    {"f1": ["p1"], "f2": ["p4.ui", "p5.ui"], "fs.ui.x": ["p5.ui"]},
)
resolver = Resolver(model, ws)
for ref in (
    ElementRef(ElementKind.PLUGIN, "p1"),
    ElementRef(ElementKind.PLUGIN_GROUP, "ui"),
    ElementRef(ElementKind.PLUGIN_GROUP, "ALL"),
    ElementRef(ElementKind.FEATURE_GROUP, "combined"),
):
    print(f"{ref!s:28} -> {sorted(resolver.plugins_of(ref))}")

# %% Features listed in the base but absent from the workspace contribute nothing.
for diag in resolver.diagnostics:
    print(diag)

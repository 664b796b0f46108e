"""Reading manifests and feature.xml files into a dependency graph."""

# %%
from pathlib import Path

from depcol import build_dependency_graph, generate_bases, parse_manifest, scan_workspace

HERE = Path(__file__).parent

# %% A single manifest: continuation lines, directives and optional requirements.
manifest = parse_manifest(
    b"Bundle-SymbolicName: p1;singleton:=true\n"
    b'Require-Bundle: p4.ui;bundle-version="[1.0,2.0)", p5.ui;resolution:=optional,\n'
    b" p6.i18n\n"
)
print(manifest.symbolic_name, manifest.required_bundles)

# %% A whole workspace.
ws, diagnostics = scan_workspace([HERE / "sample" / "workspace"])
print(f"{len(ws.plugins)} plugins, {len(ws.features)} features")
print("features of shop.core:", sorted(ws.features_of_plugin["shop.core"]))

graph, graph_diags = build_dependency_graph(ws)
for plugin, targets in graph.edges.items():
    print(f"  {plugin:18} -> {', '.join(targets) or '-'}")
for diag in diagnostics + graph_diags:
    print(diag)

# %% Optional requirements can be left out of the graph.
strict, _ = build_dependency_graph(ws, include_optional=False)
print("shop.core without optional:", strict.targets("shop.core"))

# %% Starting a model: generate the bases from what the workspace contains.
print(generate_bases(ws))

"""Constraint evaluation: later constraints refine earlier ones."""

# %%
from depcol import (
    PluginPair,
    Workspace,
    build_dependency_graph,
    effective_properties,
    evaluate_all,
    evaluate_plugin,
    oracle_evaluate,
    parse_model,
)

# A plugin group forbids everything, tolerates UI plugins, and a plugin-level
# rule then allows one specific dependency.
model = parse_model(
    """
declare pluginbase { p1; p2; p3; p4.ui; p5.ui; p6.i18n; }
declare plugingroup pg1 { p1; }
declare plugingroup pgUi { *.ui; }

pluginGroup pg1 {
  forbid dependency to pluginGroup ALL;
  tolerate dependency to pluginGroup pgUi;
}
plugin p1 {
  allow dependency to plugin p4.ui;
}
"""
)
ws = Workspace.from_dicts({"p1": ["p4.ui", "p5.ui", "p6.i18n"], "p2": [], "p3": [], "p4.ui": [], "p5.ui": [], "p6.i18n": []})
graph, _ = build_dependency_graph(ws, plugin_base=model.plugin_base.entries)

# %% Checking one plugin walks the constraints from last to first.
result = evaluate_plugin("p1", model, ws, graph)
for name in ("allowed", "critical", "error", "warning"):
    print(f"{name:9}", sorted(result.relation.pairs(name)))

# %% Every time an edge is already decided, a refinement is logged.
for event in result.refinements:
    print(f"#{event.refiner_ordinal} refines #{event.refined_ordinal} on {list(map(str, event.witness_pairs))}")

# %% The forward oracle (last matching constraint wins) agrees edge by edge.
engine = effective_properties(evaluate_all(model, ws, graph))
oracle = oracle_evaluate(model, ws, graph)
print(engine == oracle, oracle[PluginPair("p1", "p5.ui")])

# %% Ordering is purely textual: a generic rule written last overrides specific ones.
flipped = parse_model(
    """
declare pluginbase { p1; p2; p3; p4.ui; p5.ui; p6.i18n; }
declare plugingroup pg1 { p1; }
plugin p1 { allow dependency to plugin p4.ui; }
pluginGroup pg1 { forbid dependency to pluginGroup ALL; }
"""
)
print(sorted(map(str, evaluate_plugin("p1", flipped, ws, graph).relation.pairs("error"))))

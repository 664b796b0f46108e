"""Rendering reports, and the same pipeline through the command line."""

# %%
import json
import subprocess
import sys
from pathlib import Path

from depcol import (
    Checker,
    build_dependency_graph,
    build_report,
    parse_model,
    render_json,
    render_text,
    scan_workspace,
)

SAMPLE = Path(__file__).parent / "sample"
model = parse_model((SAMPLE / "architecture.depcol").read_text(), "architecture.depcol")
ws, _ = scan_workspace([SAMPLE / "workspace"])
graph, _ = build_dependency_graph(ws, plugin_base=model.plugin_base.entries)
checker = Checker(model, ws, graph)
report = build_report(checker.evaluate_all(), model, ws)

# %% Messages are grouped by severity and phrased at the level of the constraint.
print(render_text(report, include_diagnostics=False))

# %% [markdown]
# Note the second refinement: the generic `backend` rule is written after the
# critical `shop.core` rule, so it wins on their overlap and the core's UI
# dependencies are only reported as warnings. Moving the `shop.core` block to
# the end of the model restores the critical verdict.

# %% The JSON form carries the same content for tools.
doc = json.loads(render_json(report))
print(doc["summary"], [v["constraintOrdinal"] for v in doc["violations"]])

# %% Command line: exit code 1 because warnings count by default.
cmd = [sys.executable, "-m", "depcol", "check", "--model", str(SAMPLE / "architecture.depcol"), "--workspace", str(SAMPLE / "workspace")]
for extra in ([], ["--fail-on", "critical"], ["--plugin", "shop.reports", "--format", "json"]):
    proc = subprocess.run(cmd + extra, capture_output=True, text=True)
    print(" ".join(["depcol check ..."] + extra), "->", proc.returncode)

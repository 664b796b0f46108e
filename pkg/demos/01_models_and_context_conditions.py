"""Parsing DepCoL models and checking their context conditions.

Run with ``python demos/01_models_and_context_conditions.py``.
"""

# %%
from depcol import DepcolSyntaxError, parse_model, validate_model

text = """
declare featurebase { f1; f2; f3; }
declare pluginbase { p1; p2; }
declare featuregroup core { f1; f2; }

plugin p1 {
    [critical] forbid dependency to feature f2;
    allow dependency to featuregroup core;
}
"""
model = parse_model(text, "intro.depcol")
print("feature base:", model.feature_base.entries)
for stmt in model.statements:
    print(f"  #{stmt.ordinal} line {stmt.location.line}: {stmt.describe()}")

# %% [markdown]
# Keywords are case-insensitive (`pluginGroup` and `plugingroup` are the same)
# and every statement gets a global ordinal in textual order. Ordinals are what
# later decide which constraint refines which.

# %%
print(validate_model(model))  # clean

# %% Context conditions catch names outside the bases, unknown groups, cycles...
broken = parse_model(
    """
declare featurebase { f1; }
declare pluginbase { p1; p1; }
declare featuregroup loop { featuregroup loop; }
declare plugingroup ALL { p1; }
plugin p1 {
    forbid dependency to feature f9;
    [error] tolerate dependency to plugingroup missing;
}
""",
    "broken.depcol",
)
for diag in validate_model(broken):
    print(diag)

# %% ...while syntax errors are collected in one pass and raised together.
try:
    parse_model("plugin p1 {\n  forbid dependency plugin p2;\n  allow dependency to plugin p3\n}\n", "typo.depcol")
except DepcolSyntaxError as exc:
    for diag in exc.diagnostics:
        print(diag)

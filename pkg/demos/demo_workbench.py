"""Hand combination for grammar diagnosis: build a tree, hit a clash, undo.

Run: python3 demos/demo_workbench.py
"""

from pathlib import Path

from ltagbench.export import export_tree, to_bracketed
from ltagbench.pipeline import PipelineConfig, Workspace

ws = Workspace(PipelineConfig.sample())

print("== build 'John madly loves Mary' by hand ==")
ws.scratch_new("demo", "alpha_nx0Vnx1", ["loves"])
print(f"  start:  {to_bracketed(ws.scratch['demo'].root)}")

ws.hand_combine("demo", (0,), "alpha_NXPn", "substitution", ["John"])
print(f"  + John: {to_bracketed(ws.scratch['demo'].root)}")

ws.hand_combine("demo", (1,), "beta_ARBvx", "adjunction", ["madly"])
print(f"  + madly:{to_bracketed(ws.scratch['demo'].root)}")

ws.hand_combine("demo", (1, 1, 1), "alpha_NXPn", "substitution", ["Mary"])
print(f"  + Mary: {to_bracketed(ws.scratch['demo'].root)}")

print("\n== a clash shows exactly which feature path failed ==")
report = ws.hand_combine("demo", (1,), "beta_NEGvx", "adjunction", ["n't"])
print(f"  adjoining negation at the indicative VP: ok={report.ok}")
print(f"  diagnostic: {report.message}")

print("\n== undo restores the previous state ==")
before = to_bracketed(ws.scratch["demo"].root)
ws.scratch_undo("demo")
print(f"  after undo: {to_bracketed(ws.scratch['demo'].root)}")
print(f"  (one combination rolled back; clash already left the tree unchanged)")

out = Path("demo_tree.svg")
out.write_text(export_tree(ws.scratch["demo"].root, "svg"))
print(f"\nwrote an SVG rendering to {out}")

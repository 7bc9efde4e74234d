"""The full pipeline over the bundled sample grammar.

Run: python3 demos/demo_pipeline.py
"""

from ltagbench.pipeline import PipelineConfig, Workspace

ws = Workspace(PipelineConfig.sample())
print(f"grammar: {len(ws.grammar.trees)} trees, {len(ws.grammar.families)} families")
print(f"lexicon: {len(ws.morph_db)} morph entries, {len(ws.synt_db.all_entries())} synt entries")

for sentence in [
    "John loves Mary .",
    "the dog quickly barks",
    "dogs don't bark",
    "Love Mary",
    "*dogs barks",
    "*John doesn't loves Mary",
]:
    starred = sentence.startswith("*")
    text = sentence.lstrip("*")
    outcome = ws.run_pipeline(text)
    flag = "*" if starred else " "
    print(f"\n{flag} {text}")
    print(f"  tokens: {outcome.tokens}")
    print(f"  pass: {outcome.pass_}; derivations: {len(outcome.derivations)}")
    for d, t in zip(outcome.derivations, outcome.derived_trees):
        print(f"    {d.expr()}")
        print(f"    {t.bracketed()}")
    if not outcome.parsed:
        counts = outcome.diagnostics.get("candidate_counts", [])
        pairs = ", ".join(f"{w}:{n}" for w, n in zip(outcome.tokens, counts))
        print(f"    no parse; candidates per word: {pairs}")

print("\n== unknown words fall back to default entries and default trees ==")
outcome = ws.run_pipeline("the blork glipes Mary")
print(f"  'the blork glipes Mary': pass={outcome.pass_}, derivations={len(outcome.derivations)}")
for d in outcome.derivations:
    print(f"    {d.expr()}")

print("\n== tagger modes ==")
for mode in ["enabled", "disabled", "retry-on-failure"]:
    outcome = ws.run_pipeline("Mary walks the dogs .", tagger_mode=mode)
    print(f"  {mode:17s} -> {len(outcome.derivations)} derivation(s), pass={outcome.pass_}")

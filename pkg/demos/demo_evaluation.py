"""Parseval scoring and corpus reports.

Run: python3 demos/demo_evaluation.py
"""

from ltagbench.evaluation import (
    corpus_report,
    load_gold,
    parse_bands,
    parse_brackets,
    score_sentence,
    tree_to_brackets,
)
from ltagbench.pipeline import PipelineConfig, Workspace

print("== scoring one candidate against a gold bracketing ==")
gold = parse_brackets("(S (NP the dog) (VP barks))")
flat = parse_brackets("(S (X the) (Y dog barks))")
r = score_sentence(flat, gold)
print(f"  matched={r.matched} crossing={r.crossing} "
      f"recall={r.recall:.2f} precision={r.precision:.2f}")

print("\n== detailed parses against skeletal gold: high recall, low precision ==")
ws = Workspace(PipelineConfig.sample())
sentences = ["John loves Mary", "the dog barks .", "Mary walks the dogs ."]
gold_lines = [
    "(S (NP John) (VP loves Mary))",
    "(S (NP the dog) (VP barks .))",
    "(S (NP Mary) (VP walks the dogs) (PU .))",
]
outcomes = [ws.run_pipeline(s) for s in sentences]
golds = [parse_brackets(g) for g in gold_lines]
for o, g in zip(outcomes, golds):
    candidate = tree_to_brackets(o.derived_trees[0])
    r = score_sentence(candidate, g)
    print(f"  {' '.join(o.tokens):28s} recall={r.recall:.2f} precision={r.precision:.2f} "
          f"crossing={r.crossing}")

print("\n== corpus-level report with length bands ==")
report = corpus_report(outcomes, gold=golds, bands=parse_bands("1-3,1-10"))
print(report.render())

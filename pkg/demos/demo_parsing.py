"""Anchoring elementary trees and parsing with substitution and adjunction.

Run: python3 demos/demo_parsing.py
"""

from ltagbench import anchor, load_grammar, parse_equations
from ltagbench.parser import count_constituents, parse

GRAMMAR = """\
ltag-grammar v1
start S
tree alpha_NP initial
0 NP anchor top={} bot={}
tree alpha_nx0Vnx1 initial
0 S interior top={} bot={}
0.0 NP subst top={}
0.1 VP interior top={} bot={}
0.1.0 V anchor top={} bot={}
0.1.1 NP subst top={}
tree beta_ARBvx auxiliary
0 VP interior top={} bot={}
0.0 Adv anchor top={} bot={}
0.1 VP foot top={}
"""

g = load_grammar(GRAMMAR)
print(f"grammar: {len(g.trees)} trees, start category {g.default_start}")

john = anchor(g.trees["alpha_NP"], ["John"], [], "N")
mary = anchor(g.trees["alpha_NP"], ["Mary"], [], "N")
loves = anchor(g.trees["alpha_nx0Vnx1"], ["loves"], [], "V")
madly = anchor(g.trees["beta_ARBvx"], ["madly"], [], "Adv")

print("\n== substitution only ==")
outcome = parse(["John", "loves", "Mary"], [[john], [loves], [mary]], "S")
for d, t in zip(outcome.derivations, outcome.derived_trees):
    print(f"  derivation: {d.expr()}")
    print(f"  derived:    {t.bracketed()}")
    print(f"  constituents: {count_constituents(t)}")

print("\n== with an adjunction ==")
outcome = parse(
    ["John", "madly", "loves", "Mary"], [[john], [madly], [loves], [mary]], "S"
)
for d, t in zip(outcome.derivations, outcome.derived_trees):
    print(f"  derivation: {d.expr()}")
    print(f"  derived:    {t.bracketed()}")

print("\n== feature pruning: agreement ==")
sg_verb = anchor(
    g.trees["alpha_nx0Vnx1"], ["loves"], parse_equations("anchor.bot.agr.num=sg"), "V"
)
pl_subj = anchor(g.trees["alpha_NP"], ["dogs"], parse_equations("root.bot.agr.num=pl"), "N")
outcome = parse(["dogs", "loves", "Mary"], [[pl_subj], [sg_verb], [mary]], "S")
print(f"  'dogs loves Mary' derivations: {len(outcome.derivations)} (num pl vs sg)")

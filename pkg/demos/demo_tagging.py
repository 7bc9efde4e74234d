"""Trigram training, Viterbi, N-best sequences, and the POS blender.

Run: python3 demos/demo_tagging.py
"""

from ltagbench.morphology import MorphEntry
from ltagbench.tagger import blend, n_best, train, viterbi

lines = [
    "the/D dog/N runs/V",
    "the/D cat/N runs/V",
    "a/D dog/N sees/V the/D cat/N",
    "dogs/N run/V",
    "the/D saw/N cuts/V",
    "dogs/N saw/V the/D cat/N",
]
corpus = [[tuple(tok.rsplit("/", 1)) for tok in line.split()] for line in lines]
model, lexprobs = train(corpus)
print(f"trained on {len(corpus)} sentences; lambdas = "
      + ", ".join(f"{l:.3f}" for l in model.lambdas))

words = ["dogs", "saw", "the", "cat"]
print(f"\n== viterbi over {' '.join(words)} ==")
best = viterbi(words, model, lexprobs)
print("  " + " ".join(f"{w}/{t}" for w, t in zip(words, best.tags)), f"({best.score:.3f})")

print("\n== the 3 best sequences ==")
for seq in n_best(words, model, lexprobs, 3):
    print(f"  {seq.score:8.3f}  " + " ".join(seq.tags))

print("\n== blending tagger output with morphological analyses ==")
morph = [
    [MorphEntry("dogs", "dog", "N", frozenset(["pl"]))],
    [
        MorphEntry("saw", "saw", "N", frozenset(["sg"])),
        MorphEntry("saw", "see", "V", frozenset(["past"])),
    ],
    [MorphEntry("the", "the", "D")],
    [MorphEntry("cat", "cat", "N", frozenset(["sg"]))],
]
blended = blend(morph, n_best(words, model, lexprobs, 2))
for w, pairs in zip(words, blended):
    readings = ", ".join(f"{pos}({e.root})" for pos, e in pairs)
    print(f"  {w:5s} -> {readings}")
print("  'saw' keeps only the analyses whose POS the tagger proposed")

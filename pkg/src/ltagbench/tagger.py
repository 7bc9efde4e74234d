"""Trigram POS tagger with N-best output, and the POS blender.

Transitions are deleted-interpolation smoothed trigram/bigram/unigram
estimates; emissions are additively smoothed (k = 0.5) with one reserved
slot per tag for unknown words. N-best decoding is a tree-trellis search: a
forward Viterbi pass records the best prefix score (and its
lexicographically smallest achiever) per state, then a backward best-first
enumeration emits complete sequences in exact (-score, tags) order.

The blender intersects per-word morphological analyses with the tags the
N-best sequences propose at that position, falling back to the unfiltered
analyses when the intersection would be empty.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .morphology import MorphEntry

START = "<s>"
END = "</s>"
EMISSION_K = 0.5


@dataclass
class TrigramModel:
    """Transition model: interpolated trigram/bigram/unigram log-probabilities."""

    tagset: set[str]
    lambdas: tuple[float, float, float]  # (unigram, bigram, trigram)
    trigram_counts: dict[tuple[str, str, str], int]
    bigram_counts: dict[tuple[str, str], int]
    unigram_counts: dict[str, int]
    total_tags: int
    bigram_context: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.bigram_context:
            for (a, _), n in self.bigram_counts.items():
                self.bigram_context[a] = self.bigram_context.get(a, 0) + n

    def transition(self, t: str, u: str, v: str) -> float:
        """log P(t | u, v) under deleted interpolation."""
        l1, l2, l3 = self.lambdas
        p = 0.0
        c_uv = self.bigram_counts.get((u, v), 0)
        if c_uv:
            p += l3 * self.trigram_counts.get((u, v, t), 0) / c_uv
        c_v = self.bigram_context.get(v, 0)
        if c_v:
            p += l2 * self.bigram_counts.get((v, t), 0) / c_v
        if self.total_tags:
            p += l1 * self.unigram_counts.get(t, 0) / self.total_tags
        return math.log(p) if p > 0 else -math.inf

    def score_sequence(self, words: list[str], tags: list[str], lexprobs) -> float:
        """Exact model score of one complete tagging (recomputable invariant)."""
        if len(words) != len(tags):
            raise ValueError("words and tags must align")
        score = 0.0
        context = (START, START)
        for w, t in zip(words, tags):
            score += self.transition(t, *context) + lexprobs.emission(w, t)
            context = (context[1], t)
        score += self.transition(END, *context)
        return score


@dataclass
class LexProbTable:
    """Emission model: log P(word | tag) with per-tag unknown-word mass."""

    word_tag_counts: dict[tuple[str, str], int]
    tag_counts: dict[str, int]
    vocabulary: set[str]

    def emission(self, word: str, tag: str) -> float:
        c_t = self.tag_counts.get(tag, 0)
        denom = c_t + EMISSION_K * (len(self.vocabulary) + 1)
        count = self.word_tag_counts.get((word, tag), 0) if word in self.vocabulary else 0
        return math.log((count + EMISSION_K) / denom)

    def unknown_emission(self, tag: str) -> float:
        """The stored open-class log-probability for words outside the vocabulary."""
        c_t = self.tag_counts.get(tag, 0)
        return math.log(EMISSION_K / (c_t + EMISSION_K * (len(self.vocabulary) + 1)))

    def ml_emission(self, word: str, tag: str) -> float:
        """Unsmoothed relative frequency P(word | tag); 0 when unseen."""
        c_t = self.tag_counts.get(tag, 0)
        if not c_t:
            return 0.0
        return self.word_tag_counts.get((word, tag), 0) / c_t


@dataclass
class TagSequence:
    tags: list[str]
    score: float

    def as_tuple(self):
        return tuple(self.tags)


def _padded(tags: list[str]) -> list[str]:
    return [START, START] + list(tags) + [END]


def train(corpus: list[list[tuple[str, str]]]) -> tuple[TrigramModel, LexProbTable]:
    """Relative-frequency estimates with held-out deleted interpolation.

    The last 10% of sentences (at least one, when the corpus has five or
    more) are held out to set the interpolation weights; with a smaller
    corpus the weights are assigned over the full counts instead.
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("training corpus is empty")
    held = max(1, len(corpus) // 10) if len(corpus) >= 5 else 0
    train_part = corpus[: len(corpus) - held] if held else corpus
    held_part = corpus[len(corpus) - held :] if held else corpus

    tri: dict[tuple[str, str, str], int] = {}
    bi: dict[tuple[str, str], int] = {}
    uni: dict[str, int] = {}
    word_tag: dict[tuple[str, str], int] = {}
    tag_counts: dict[str, int] = {}
    vocabulary: set[str] = set()
    tagset: set[str] = set()

    def count(sentences, tri, bi, uni):
        for sent in sentences:
            tags = _padded([t for _, t in sent])
            for a, b, c in zip(tags, tags[1:], tags[2:]):
                tri[(a, b, c)] = tri.get((a, b, c), 0) + 1
            for a, b in zip(tags, tags[1:]):
                bi[(a, b)] = bi.get((a, b), 0) + 1
            # unigrams range over real tags only (END stays a boundary event)
            for t in tags[2:-1]:
                uni[t] = uni.get(t, 0) + 1

    count(train_part, tri, bi, uni)
    for sent in corpus:
        for w, t in sent:
            if t in (START, END):
                raise ValueError(f"corpus uses the reserved tag {t!r}")
            tagset.add(t)
            vocabulary.add(w)
            word_tag[(w, t)] = word_tag.get((w, t), 0) + 1
            tag_counts[t] = tag_counts.get(t, 0) + 1

    total = sum(uni.values())
    l1 = l2 = l3 = 0.0
    for sent in held_part:
        tags = _padded([t for _, t in sent])
        for a, b, c in zip(tags, tags[1:], tags[2:]):
            c_abc = tri.get((a, b, c), 0)
            c_ab = bi.get((a, b), 0)
            c_bc = bi.get((b, c), 0)
            c_b = uni.get(b, 0)
            c_c = uni.get(c, 0)
            est3 = (c_abc - 1) / (c_ab - 1) if c_ab > 1 else 0.0
            est2 = (c_bc - 1) / (c_b - 1) if c_b > 1 else 0.0
            est1 = (c_c - 1) / (total - 1) if total > 1 else 0.0
            best = max(est3, est2, est1)
            if best <= 0:
                continue
            if est3 == best:
                l3 += 1
            elif est2 == best:
                l2 += 1
            else:
                l1 += 1
    # One pseudo-assignment per estimator keeps every component available
    # (a zero lambda would make unseen sentence-final contexts unscorable).
    l1, l2, l3 = l1 + 1, l2 + 1, l3 + 1
    norm = l1 + l2 + l3
    lambdas = (l1 / norm, l2 / norm, l3 / norm)

    # Final transition counts always come from the full corpus.
    tri, bi, uni = {}, {}, {}
    count(corpus, tri, bi, uni)
    model = TrigramModel(tagset, lambdas, tri, bi, uni, sum(uni.values()))
    lexprobs = LexProbTable(word_tag, tag_counts, vocabulary)
    return model, lexprobs


def _forward(words, model: TrigramModel, lexprobs: LexProbTable):
    """Best prefix score and lexicographically-smallest achiever per state."""
    states: list[dict[tuple[str, str], tuple[float, tuple[str, ...]]]] = [
        {(START, START): (0.0, ())}
    ]
    tags = sorted(model.tagset)
    for w in words:
        prev = states[-1]
        cur: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
        for (u, v), (score, seq) in prev.items():
            for t in tags:
                s = score + model.transition(t, u, v) + lexprobs.emission(w, t)
                if s == -math.inf:
                    continue
                cand = (s, seq + (t,))
                old = cur.get((v, t))
                if old is None or cand[0] > old[0] or (cand[0] == old[0] and cand[1] < old[1]):
                    cur[(v, t)] = cand
        states.append(cur)
    return states


def viterbi(words: list[str], model: TrigramModel, lexprobs: LexProbTable) -> TagSequence:
    """Maximum-score tagging; equal scores break to the smallest tag sequence."""
    if not words:
        return TagSequence([], 0.0)
    states = _forward(words, model, lexprobs)
    best = None
    for (u, v), (score, seq) in states[-1].items():
        s = score + model.transition(END, u, v)
        if s == -math.inf:
            continue
        cand = (s, seq)
        if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
            best = cand
    if best is None:
        raise ValueError("no tag sequence has finite probability")
    return TagSequence(list(best[1]), best[0])


def n_best(
    words: list[str], model: TrigramModel, lexprobs: LexProbTable, n: int
) -> list[TagSequence]:
    """The ``n`` highest-scoring distinct sequences, best first.

    Forward pass as in viterbi; the backward A* enumeration keys its heap on
    (-(exact suffix + best prefix), projected full sequence), so pops arrive
    in exactly the order of sorting all sequences by (-score, tags).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not words:
        return []
    states = _forward(words, model, lexprobs)
    length = len(words)
    heap = []
    counter = 0
    for (u, v), (prefix_score, prefix_seq) in states[-1].items():
        g = model.transition(END, u, v)
        if g == -math.inf:
            continue
        total = g + prefix_score
        counter += 1
        heapq.heappush(heap, (-total, prefix_seq, counter, length, (u, v), g, ()))
    out: list[TagSequence] = []
    while heap and len(out) < n:
        neg_total, projected, _, i, (u, v), g, suffix = heapq.heappop(heap)
        if i == 0:
            out.append(TagSequence(list(projected), -neg_total))
            continue
        # move the boundary left: word i-1 carries tag v
        for (u2, v2), (prefix_score, prefix_seq) in states[i - 1].items():
            if v2 != u:
                continue
            g2 = g + model.transition(v, u2, v2) + lexprobs.emission(words[i - 1], v)
            if g2 == -math.inf:
                continue
            total = g2 + prefix_score
            counter += 1
            heapq.heappush(
                heap,
                (-total, prefix_seq + (v,) + suffix, counter, i - 1, (u2, v2), g2, (v,) + suffix),
            )
    return out


def blend(
    morph: list[list[MorphEntry]], nbest: list[TagSequence]
) -> list[list[tuple[str, MorphEntry]]]:
    """Keep analyses whose POS some N-best sequence proposes at that position.

    Positions where the intersection would be empty keep their full
    morphological candidate set; the result is never empty where the
    morphological input was not.
    """
    if nbest:
        for seq in nbest:
            if len(seq.tags) != len(morph):
                raise ValueError("tag sequence length does not match sentence length")
    out: list[list[tuple[str, MorphEntry]]] = []
    for i, analyses in enumerate(morph):
        allowed = {seq.tags[i] for seq in nbest}
        kept = [e for e in analyses if e.pos in allowed] if allowed else list(analyses)
        if not kept:
            kept = list(analyses)
        out.append([(e.pos, e) for e in sorted(kept, key=MorphEntry.sort_key)])
    return out


# ---------------------------------------------------------------------------
# Persistence: versioned text file holding counts and lambdas


def dump_model(model: TrigramModel, lexprobs: LexProbTable) -> str:
    lines = ["ltag-tagger v1"]
    lines.append("lambdas\t%.17g\t%.17g\t%.17g" % model.lambdas)
    lines.append("tags\t" + "\t".join(sorted(model.tagset)))
    for (a, b, c), n in sorted(model.trigram_counts.items()):
        lines.append(f"tri\t{a}\t{b}\t{c}\t{n}")
    for (a, b), n in sorted(model.bigram_counts.items()):
        lines.append(f"bi\t{a}\t{b}\t{n}")
    for a, n in sorted(model.unigram_counts.items()):
        lines.append(f"uni\t{a}\t{n}")
    for (w, t), n in sorted(lexprobs.word_tag_counts.items()):
        lines.append(f"emit\t{w}\t{t}\t{n}")
    return "\n".join(lines) + "\n"


def load_model(text: str) -> tuple[TrigramModel, LexProbTable]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ltag-tagger v1":
        raise ValueError("missing 'ltag-tagger v1' header")
    lambdas = (1 / 3, 1 / 3, 1 / 3)
    tagset: set[str] = set()
    tri: dict = {}
    bi: dict = {}
    uni: dict = {}
    word_tag: dict = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split("\t")
        kind = parts[0]
        if kind == "lambdas":
            lambdas = (float(parts[1]), float(parts[2]), float(parts[3]))
        elif kind == "tags":
            tagset = set(parts[1:])
        elif kind == "tri":
            tri[(parts[1], parts[2], parts[3])] = int(parts[4])
        elif kind == "bi":
            bi[(parts[1], parts[2])] = int(parts[3])
        elif kind == "uni":
            uni[parts[1]] = int(parts[2])
        elif kind == "emit":
            word_tag[(parts[1], parts[2])] = int(parts[3])
        else:
            raise ValueError(f"unknown record {kind!r} in tagger model")
    tag_counts: dict[str, int] = {}
    vocabulary: set[str] = set()
    for (w, t), n in word_tag.items():
        tag_counts[t] = tag_counts.get(t, 0) + n
        vocabulary.add(w)
    model = TrigramModel(tagset, lambdas, tri, bi, uni, sum(uni.values()))
    return model, LexProbTable(word_tag, tag_counts, vocabulary)

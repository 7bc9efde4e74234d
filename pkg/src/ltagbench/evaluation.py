"""Parseval-style scoring: matched constituents, crossing brackets, reports.

A candidate bracketing is scored against a gold bracketing by unlabeled span
match (label-sensitive matching behind a flag): recall is matched
constituents over gold constituents, precision over candidate constituents,
and a candidate span crosses a gold span when the two overlap without
nesting. Corpus reports aggregate percent parsed, parses per sentence,
words and constituents per sentence, and recall/precision/crossing rates,
with optional sentence-length bands.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .parser import DerivedNode, ParseOutcome, count_constituents


@dataclass(frozen=True)
class BracketedSentence:
    tokens: tuple[str, ...]
    constituents: frozenset[tuple[str | None, int, int]]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "constituents", frozenset(self.constituents))
        for label, start, end in self.constituents:
            if not (0 <= start < end <= len(self.tokens)):
                raise ValueError(
                    f"span ({start}, {end}) out of range for {len(self.tokens)} tokens"
                )


@dataclass
class EvalResult:
    candidate_constituents: int
    gold_constituents: int
    matched: int
    crossing: int
    sentence_crossing_free: bool

    def __post_init__(self):
        if self.matched > min(self.candidate_constituents, self.gold_constituents):
            raise ValueError("matched exceeds constituent counts")
        if self.crossing > self.candidate_constituents:
            raise ValueError("crossing exceeds candidate constituents")

    @property
    def recall(self) -> float:
        return self.matched / self.gold_constituents if self.gold_constituents else 1.0

    @property
    def precision(self) -> float:
        return self.matched / self.candidate_constituents if self.candidate_constituents else 1.0


def spans_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Overlap without nesting; symmetric."""
    (s1, e1), (s2, e2) = a, b
    return s1 < s2 < e1 < e2 or s2 < s1 < e2 < e1


def score_sentence(
    candidate: BracketedSentence, gold: BracketedSentence, labeled: bool = False
) -> EvalResult:
    """Parseval counts for one sentence (unlabeled span match by default)."""
    if candidate.tokens != gold.tokens:
        raise ValueError("candidate and gold token sequences differ")

    def project(b: BracketedSentence):
        if labeled:
            return Counter((label, s, e) for label, s, e in b.constituents)
        return Counter((s, e) for _, s, e in b.constituents)

    cand = project(candidate)
    gld = project(gold)
    matched = sum(min(n, gld[span]) for span, n in cand.items())
    gold_spans = {(s, e) for _, s, e in gold.constituents}
    crossing = sum(
        n
        for span, n in Counter((s, e) for _, s, e in candidate.constituents).items()
        if any(spans_cross(span, g) for g in gold_spans)
    )
    return EvalResult(
        candidate_constituents=sum(cand.values()),
        gold_constituents=sum(gld.values()),
        matched=matched,
        crossing=crossing,
        sentence_crossing_free=crossing == 0,
    )


def best_parse_score(
    candidates: list[BracketedSentence],
    gold: BracketedSentence,
    labeled: bool = False,
    selection: str = "best",
) -> EvalResult:
    """Score of the best candidate (crossing-free, then recall, then precision).

    ``selection="first"`` scores the first candidate instead; ties always
    break to the earlier candidate.
    """
    if not candidates:
        raise ValueError("no candidate bracketings to score")
    if selection == "first":
        return score_sentence(candidates[0], gold, labeled)
    best = None
    for c in candidates:
        r = score_sentence(c, gold, labeled)
        key = (r.sentence_crossing_free, r.recall, r.precision)
        if best is None or key > best[0]:
            best = (key, r)
    return best[1]


# ---------------------------------------------------------------------------
# Bracketings from derived trees and from text


def tree_to_brackets(tree: DerivedNode, drop_preterminals: bool = False) -> BracketedSentence:
    """Constituent spans of a derived tree.

    With ``drop_preterminals`` nodes dominating exactly one word leaf are
    omitted (skeletal treebank style); all other internal nodes contribute.
    """
    constituents: list[tuple[str | None, int, int]] = []
    tokens: list[str] = []

    def walk(node: DerivedNode) -> tuple[int, int]:
        if node.is_leaf():
            if node.word is not None:
                tokens.append(node.word)
                return (len(tokens) - 1, len(tokens))
            return (len(tokens), len(tokens))
        start = len(tokens)
        for c in node.children:
            walk(c)
        end = len(tokens)
        preterminal = len(node.children) == 1 and node.children[0].word is not None
        if end > start and not (drop_preterminals and preterminal):
            constituents.append((node.label, start, end))
        return (start, end)

    walk(tree)
    return BracketedSentence(tuple(tokens), frozenset(constituents))


class BracketSyntaxError(ValueError):
    pass


def parse_brackets(text: str) -> BracketedSentence:
    """One s-expression bracketing: ``(S (NP John) (VP (V loves) (NP Mary)))``.

    A group's first element is its label when it is a bare symbol followed by
    at least one child; a group whose first element is another group is an
    unlabeled constituent.
    """
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def atom():
        nonlocal pos
        start = pos
        while pos < len(text) and not text[pos].isspace() and text[pos] not in "()":
            pos += 1
        if pos == start:
            raise BracketSyntaxError(f"expected a symbol at offset {pos}")
        return text[start:pos]

    tokens: list[str] = []
    constituents: list[tuple[str | None, int, int]] = []

    def group():
        nonlocal pos
        assert text[pos] == "("
        pos += 1
        skip_ws()
        label = None
        first = True
        start_tok = len(tokens)
        children = 0
        while True:
            skip_ws()
            if pos >= len(text):
                raise BracketSyntaxError("unbalanced brackets")
            if text[pos] == ")":
                pos += 1
                break
            if text[pos] == "(":
                group()
                children += 1
            else:
                word = atom()
                if first and label is None and children == 0:
                    label = word
                else:
                    tokens.append(word)
                    children += 1
            first = False
        if children == 0:
            if label is None:
                raise BracketSyntaxError("empty bracket group")
            # a lone atom in brackets is a word, not a label
            tokens.append(label)
            label = None
        constituents.append((label, start_tok, len(tokens)))

    skip_ws()
    if pos >= len(text) or text[pos] != "(":
        raise BracketSyntaxError("bracketing must start with '('")
    group()
    skip_ws()
    if pos != len(text):
        raise BracketSyntaxError(f"trailing input at offset {pos}")
    return BracketedSentence(tuple(tokens), frozenset(constituents))


def load_gold(text: str) -> list[BracketedSentence]:
    """One bracketed sentence per non-blank line."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_brackets(line))
    return out


# ---------------------------------------------------------------------------
# Corpus-level report


def round_half_up(x: float, places: int = 2) -> float:
    q = Decimal(10) ** -places
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def format_percent(numerator: int, denominator: int) -> str:
    """Half-up two-decimal percent: 7721/18730 -> \"41.22%\"."""
    if denominator == 0:
        return "—"
    value = Decimal(numerator) * 100 / Decimal(denominator)
    return str(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)) + "%"


def _fmt(x: float | None) -> str:
    return "—" if x is None else f"{round_half_up(x):.2f}"


@dataclass
class BandRow:
    band: str
    sentences: int
    parsed: int
    percent_parsed: str
    avg_parses: float | None
    avg_words: float | None
    avg_constituents: float | None
    recall: float | None
    precision: float | None
    crossing_free_rate: str | None
    mean_crossings: float | None


@dataclass
class CorpusReport:
    rows: list[BandRow] = field(default_factory=list)

    def render(self) -> str:
        headers = [
            "band", "sents", "parsed", "%parsed", "av.parses", "av.words",
            "av.consts", "recall", "precision", "cross-free", "av.cross",
        ]
        table = [headers]
        for r in self.rows:
            table.append(
                [
                    r.band,
                    str(r.sentences),
                    str(r.parsed),
                    r.percent_parsed,
                    _fmt(r.avg_parses),
                    _fmt(r.avg_words),
                    _fmt(r.avg_constituents),
                    _fmt(r.recall),
                    _fmt(r.precision),
                    r.crossing_free_rate or "—",
                    _fmt(r.mean_crossings),
                ]
            )
        widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
        lines = []
        for row in table:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        return "\n".join(lines)


def parse_bands(spec: str) -> list[tuple[int, int]]:
    """\"1-10,1-15\" -> [(1, 10), (1, 15)]."""
    out = []
    for part in spec.split(","):
        lo, _, hi = part.strip().partition("-")
        out.append((int(lo), int(hi)))
    return out


def corpus_report(
    outcomes: list[ParseOutcome],
    gold: list[BracketedSentence] | None = None,
    bands: list[tuple[int, int]] | None = None,
    labeled: bool = False,
    drop_preterminals: bool = False,
    selection: str = "best",
) -> CorpusReport:
    """Aggregate coverage and parseval rows, recomputable per sentence.

    ``bands`` filters by token count (inclusive); a full-corpus row is always
    first. Averages over empty subsets render as em dashes.
    """
    if gold is not None and len(gold) != len(outcomes):
        raise ValueError("one gold bracketing per outcome required")

    records = []
    for idx, outcome in enumerate(outcomes):
        rec = {
            "words": len(outcome.tokens),
            "parsed": outcome.parsed,
            "parses": len(outcome.derivations),
            "consts": None,
            "eval": None,
        }
        if outcome.derived_trees:
            brackets = [
                tree_to_brackets(t, drop_preterminals) for t in outcome.derived_trees
            ]
            rec["consts"] = (
                count_constituents(outcome.derived_trees[0])
                if selection == "first"
                else max(count_constituents(t) for t in outcome.derived_trees)
            )
            if gold is not None:
                rec["eval"] = best_parse_score(brackets, gold[idx], labeled, selection)
        records.append(rec)

    def mean(values):
        values = list(values)
        return sum(values) / len(values) if values else None

    def band_row(name, subset):
        parsed = [r for r in subset if r["parsed"]]
        scored = [r for r in parsed if r["eval"] is not None]
        matched = sum(r["eval"].matched for r in scored)
        gold_total = sum(r["eval"].gold_constituents for r in scored)
        cand_total = sum(r["eval"].candidate_constituents for r in scored)
        return BandRow(
            band=name,
            sentences=len(subset),
            parsed=len(parsed),
            percent_parsed=format_percent(len(parsed), len(subset)),
            avg_parses=mean(r["parses"] for r in parsed),
            avg_words=mean(r["words"] for r in subset),
            avg_constituents=mean(r["consts"] for r in parsed if r["consts"] is not None),
            recall=matched / gold_total if gold_total else None,
            precision=matched / cand_total if cand_total else None,
            crossing_free_rate=(
                format_percent(
                    sum(1 for r in scored if r["eval"].sentence_crossing_free), len(scored)
                )
                if scored
                else None
            ),
            mean_crossings=mean(r["eval"].crossing for r in scored),
        )

    report = CorpusReport([band_row("all", records)])
    for lo, hi in bands or []:
        subset = [r for r in records if lo <= r["words"] <= hi]
        report.rows.append(band_row(f"{lo}-{hi}", subset))
    return report

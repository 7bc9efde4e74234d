"""Tree-unigram statistics over (POS tag, tree) pairs and top-k filtering.

Frequencies are collected from parsed corpora (each derivation of each
sentence contributes, unless per-sentence counting is requested). The parser
front end keeps only the k most frequent trees per word given its POS and
retries unfiltered when the filtered pass finds no derivation.

Text format: ``pos<TAB>tree<TAB>count``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .grammar import AnchoredTree
from .parser import ParseOutcome, parse


@dataclass
class StatsTable:
    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def add(self, pos: str, tree: str, n: int = 1):
        if n < 0:
            raise ValueError("counts are nonnegative")
        self.counts[(pos, tree)] = self.counts.get((pos, tree), 0) + n

    def count(self, pos: str, tree: str) -> int:
        return self.counts.get((pos, tree), 0)

    def total(self, pos: str) -> int:
        return sum(n for (p, _), n in self.counts.items() if p == pos)

    def __eq__(self, other):
        return isinstance(other, StatsTable) and self.counts == other.counts

    def dumps(self) -> str:
        lines = [f"{p}\t{t}\t{n}" for (p, t), n in sorted(self.counts.items())]
        return "\n".join(lines) + "\n" if lines else ""

    @classmethod
    def loads(cls, text: str) -> "StatsTable":
        table = cls()
        for line in text.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"stats line needs 3 tab-separated fields: {line!r}")
            table.add(parts[0], parts[1], int(parts[2]))
        return table

    @classmethod
    def load_file(cls, path) -> "StatsTable":
        with open(path, encoding="utf-8") as f:
            return cls.loads(f.read())

    def save_file(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.dumps())


def collect(sentence_derivations, per_sentence: bool = False) -> StatsTable:
    """Count (origin POS, tree) uses over a parsed corpus.

    ``sentence_derivations`` is an iterable of per-sentence derivation lists.
    By default every derivation contributes independently; with
    ``per_sentence`` each pair is counted at most once per sentence.
    """
    table = StatsTable()
    for derivations in sentence_derivations:
        if per_sentence:
            pairs = {
                (node.origin_pos, node.tree)
                for d in derivations
                for node in d.walk()
            }
            for pos, tree in sorted(pairs):
                table.add(pos, tree)
        else:
            for d in derivations:
                for node in d.walk():
                    table.add(node.origin_pos, node.tree)
    return table


def filter_top_k(candidates: list[AnchoredTree], stats: StatsTable, k: int) -> list[AnchoredTree]:
    """The k most frequent candidate trees for one word.

    Ranked by count(origin POS, tree) descending, ties by tree name
    ascending; unseen pairs count zero, so an all-zero word keeps its first k
    trees in name order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(
        candidates,
        key=lambda a: (-stats.count(a.origin_pos, a.base), a.base, a.origin_pos, a.lexemes),
    )
    return ranked[:k]


def parse_with_retry(
    tokens,
    candidates,
    start,
    stats: StatsTable,
    k: int = 3,
    parser=parse,
    **parse_kwargs,
) -> ParseOutcome:
    """Parse with per-word top-k filtering, retrying unfiltered on failure.

    The outcome's ``pass_`` records which pass produced the derivations
    ("filtered", "retry", or "none"); per-pass wall time lands in
    ``timing``.
    """
    filtered = [filter_top_k(cands, stats, k) for cands in candidates]
    t0 = time.perf_counter()
    first = parser(tokens, filtered, start, **parse_kwargs)
    t_filtered = time.perf_counter() - t0
    if first.derivations:
        first.pass_ = "filtered"
        first.timing = {"filtered": t_filtered, "total": t_filtered}
        first.seconds = t_filtered
        return first
    t1 = time.perf_counter()
    second = parser(tokens, candidates, start, **parse_kwargs)
    t_retry = time.perf_counter() - t1
    second.pass_ = "retry" if second.derivations else "none"
    second.timing = {"filtered": t_filtered, "retry": t_retry, "total": t_filtered + t_retry}
    second.seconds = t_filtered + t_retry
    return second

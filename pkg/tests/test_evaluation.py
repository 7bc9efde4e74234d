import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from ltagbench.evaluation import (
    BracketedSentence,
    best_parse_score,
    corpus_report,
    format_percent,
    load_gold,
    parse_bands,
    parse_brackets,
    score_sentence,
    spans_cross,
    tree_to_brackets,
)
from ltagbench.parser import Derivation, DerivedNode, ParseOutcome

GOLDEN = json.loads((Path(__file__).parent / "data" / "eval_golden.json").read_text())


def bs(tokens, spans):
    return BracketedSentence(tuple(tokens), frozenset((l, s, e) for l, s, e in spans))


@pytest.mark.parametrize("case", GOLDEN, ids=[c["name"] for c in GOLDEN])
def test_golden_cases(case):
    candidate = bs(case["tokens"], case["candidate"])
    gold = bs(case["tokens"], case["gold"])
    r = score_sentence(candidate, gold)
    assert r.matched == case["matched"]
    assert r.crossing == case["crossing"]
    assert f"{r.recall:.2f}" == case["recall"]
    assert f"{r.precision:.2f}" == case["precision"]
    assert r.sentence_crossing_free == case["crossing_free"]


@pytest.mark.parametrize("case", GOLDEN, ids=[c["name"] for c in GOLDEN])
def test_crossing_matches_exhaustive_pairwise_checker(case):
    candidate = bs(case["tokens"], case["candidate"])
    gold = bs(case["tokens"], case["gold"])
    gold_spans = [(s, e) for _, s, e in gold.constituents]
    expected = 0
    for _, s, e in candidate.constituents:
        crosses = False
        for gs, ge in gold_spans:
            if (s < gs < e < ge) or (gs < s < ge < e):
                crosses = True
        expected += int(crosses)
    assert score_sentence(candidate, gold).crossing == expected


def test_token_mismatch_rejected():
    with pytest.raises(ValueError):
        score_sentence(bs(["a"], []), bs(["b"], []))


def test_self_score_is_perfect():
    # Holds for internally consistent bracketings (every tree-shaped one is).
    def consistent(spans):
        return not any(
            spans_cross((s1, e1), (s2, e2))
            for _, s1, e1 in spans
            for _, s2, e2 in spans
        )

    checked = 0
    for case in GOLDEN:
        for spans in (case["candidate"], case["gold"]):
            if not consistent(spans):
                continue
            x = bs(case["tokens"], spans)
            r = score_sentence(x, x)
            assert r.recall == r.precision == 1.0
            assert r.crossing == 0
            checked += 1
    assert checked >= 10


def test_crossing_symmetry():
    spans = [(0, 2), (1, 3), (0, 3), (2, 4), (1, 4)]
    for a, b in itertools.product(spans, repeat=2):
        assert spans_cross(a, b) == spans_cross(b, a)


def test_integer_identity():
    for case in GOLDEN:
        candidate = bs(case["tokens"], case["candidate"])
        gold = bs(case["tokens"], case["gold"])
        r = score_sentence(candidate, gold)
        assert r.recall * r.gold_constituents == pytest.approx(r.matched)
        assert r.precision * r.candidate_constituents == pytest.approx(r.matched)


def test_labeled_mode_distinguishes():
    candidate = bs(["a", "b"], [("NP", 0, 2)])
    gold = bs(["a", "b"], [("VP", 0, 2)])
    assert score_sentence(candidate, gold).matched == 1
    assert score_sentence(candidate, gold, labeled=True).matched == 0


spans_strategy = st.lists(
    st.tuples(st.integers(0, 5), st.integers(1, 6)).filter(lambda se: se[0] < se[1]),
    max_size=6,
)


@given(spans_strategy, spans_strategy)
@settings(max_examples=200)
def test_scoring_invariants(cand_spans, gold_spans):
    tokens = tuple("abcdef")
    candidate = bs(tokens, [(None, s, e) for s, e in cand_spans])
    gold = bs(tokens, [(None, s, e) for s, e in gold_spans])
    r = score_sentence(candidate, gold)
    assert r.matched <= min(r.candidate_constituents, r.gold_constituents)
    assert r.crossing <= r.candidate_constituents
    assert r.sentence_crossing_free == (r.crossing == 0)


# ---------------------------------------------------------------------------
# best_parse_score


def test_best_parse_single_candidate():
    c = bs(["a", "b"], [(None, 0, 2)])
    g = bs(["a", "b"], [(None, 0, 2)])
    assert best_parse_score([c], g) == score_sentence(c, g)


def test_best_parse_prefers_crossing_free():
    g = bs(["a", "b", "c"], [(None, 0, 3), (None, 1, 3)])
    crossing = bs(["a", "b", "c"], [(None, 0, 2), (None, 0, 3)])
    clean = bs(["a", "b", "c"], [(None, 0, 3)])
    r = best_parse_score([crossing, clean], g)
    assert r.sentence_crossing_free


def test_best_parse_prefers_recall_then_first():
    g = bs(["a", "b", "c", "d"], [(None, 0, 4), (None, 0, 2), (None, 2, 4)])
    r_08 = bs(["a", "b", "c", "d"], [(None, 0, 4), (None, 0, 2)])
    r_06 = bs(["a", "b", "c", "d"], [(None, 0, 4)])
    best = best_parse_score([r_06, r_08], g)
    assert best.matched == 2
    first = best_parse_score([r_06, r_08], g, selection="first")
    assert first.matched == 1
    with pytest.raises(ValueError):
        best_parse_score([], g)


# ---------------------------------------------------------------------------
# Bracket ingestion


def test_parse_brackets_labeled_style():
    b = parse_brackets("(S (NP John) (VP (V loves) (NP Mary)))")
    assert b.tokens == ("John", "loves", "Mary")
    assert ("S", 0, 3) in b.constituents
    assert ("V", 1, 2) in b.constituents
    assert len(b.constituents) == 5


def test_parse_brackets_unlabeled_group():
    b = parse_brackets("((NP John) (VP loves))")
    assert (None, 0, 2) in b.constituents
    assert b.tokens == ("John", "loves")


def test_parse_brackets_errors():
    for bad in ["", "(S", "(S (NP John)) extra", "()"]:
        with pytest.raises(ValueError):
            parse_brackets(bad)


def test_load_gold_lines():
    text = "# comment\n(S (NP a) (VP b))\n\n(S (NP c) (VP d))\n"
    assert len(load_gold(text)) == 2


def test_tree_to_brackets_round():
    tree = DerivedNode(
        "S",
        children=[
            DerivedNode("NP", children=[DerivedNode("John", word="John")]),
            DerivedNode(
                "VP",
                children=[
                    DerivedNode("V", children=[DerivedNode("loves", word="loves")]),
                    DerivedNode("NP", children=[DerivedNode("Mary", word="Mary")]),
                ],
            ),
        ],
    )
    b = tree_to_brackets(tree)
    assert b.tokens == ("John", "loves", "Mary")
    assert ("VP", 1, 3) in b.constituents
    skeletal = tree_to_brackets(tree, drop_preterminals=True)
    assert ("V", 1, 2) not in skeletal.constituents
    assert ("S", 0, 3) in skeletal.constituents


# ---------------------------------------------------------------------------
# Corpus report


def outcome(n_tokens, n_derivs):
    d = Derivation("t", ("w",), "X")
    return ParseOutcome(
        ["w"] * n_tokens,
        [d] * n_derivs,
        [],
        "filtered" if n_derivs else "none",
        0.0,
    )


def test_percent_formatting_wsj_row():
    assert format_percent(7721, 18730) == "41.22%"
    assert format_percent(0, 10) == "0.00%"
    assert format_percent(1, 8) == "12.50%"


def test_corpus_report_counts_and_bands():
    outcomes = [outcome(3, 2), outcome(12, 1), outcome(5, 0), outcome(8, 4)]
    report = corpus_report(outcomes, bands=parse_bands("1-10,1-15"))
    all_row = report.rows[0]
    assert all_row.sentences == 4 and all_row.parsed == 3
    assert all_row.percent_parsed == "75.00%"
    assert all_row.avg_parses == pytest.approx((2 + 1 + 4) / 3)
    band10 = report.rows[1]
    assert band10.band == "1-10" and band10.sentences == 3
    band15 = report.rows[2]
    assert band15.sentences == 4


def test_corpus_report_zero_parsed_renders_dash():
    report = corpus_report([outcome(4, 0), outcome(2, 0)])
    row = report.rows[0]
    assert row.percent_parsed == "0.00%"
    assert row.avg_parses is None
    assert "—" in report.render()


def test_corpus_report_with_gold():
    tree = DerivedNode(
        "S",
        children=[
            DerivedNode("NP", children=[DerivedNode("a", word="a")]),
            DerivedNode("VP", children=[DerivedNode("b", word="b")]),
        ],
    )
    d = Derivation("t", ("a",), "X")
    o = ParseOutcome(["a", "b"], [d], [tree], "filtered", 0.0)
    gold = [parse_brackets("(S (NP a) (VP b))")]
    report = corpus_report([o], gold=gold)
    row = report.rows[0]
    assert row.recall == 1.0 and row.precision == 1.0
    assert row.crossing_free_rate == "100.00%"
    assert row.mean_crossings == 0.0
    assert row.avg_constituents == 3

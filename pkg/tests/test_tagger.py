import math

import pytest

from ltagbench.morphology import MorphEntry
from ltagbench.tagger import (
    TagSequence,
    blend,
    dump_model,
    load_model,
    n_best,
    train,
    viterbi,
)

from oracles import brute_force_sequences


def parse_tagged(lines):
    corpus = []
    for line in lines:
        corpus.append([tuple(tok.rsplit("/", 1)) for tok in line.split()])
    return corpus


TOY = parse_tagged(
    [
        "the/D dog/N runs/V",
        "the/D cat/N runs/V",
        "a/D dog/N sees/V the/D cat/N",
        "dogs/N run/V",
        "the/D dog/N sees/V a/D dog/N",
        "cats/N see/V dogs/N",
        "a/D cat/N sees/V dogs/N",
        "dogs/N see/V the/D cat/N",
        "the/D cat/N sees/V the/D dog/N",
        "cats/N run/V",
    ]
)


@pytest.fixture(scope="module")
def toy_model():
    return train(TOY)


def test_unigram_relative_frequencies():
    model, _ = train(parse_tagged(["the/Det dog/N runs/V"]))
    assert model.total_tags == 3
    for tag in ("Det", "N", "V"):
        assert model.unigram_counts[tag] / model.total_tags == pytest.approx(1 / 3)


def test_ml_emission_within_tag():
    _, lexprobs = train(parse_tagged(["the/Det dog/N", "the/Det cat/N"]))
    assert lexprobs.ml_emission("the", "Det") == 1.0
    assert lexprobs.ml_emission("the", "N") == 0.0


def test_lambdas_form_simplex(toy_model):
    model, _ = toy_model
    assert all(l >= 0 for l in model.lambdas)
    assert sum(model.lambdas) == pytest.approx(1.0)
    again, _ = train(TOY)
    assert again.lambdas == model.lambdas


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        train([])


def test_single_tag_word(toy_model):
    model, lexprobs = toy_model
    # every word unambiguous in a sentence the model has seen
    seq = viterbi(["the", "dog", "runs"], model, lexprobs)
    assert seq.tags == ["D", "N", "V"]
    assert seq.score == pytest.approx(
        model.score_sequence(["the", "dog", "runs"], seq.tags, lexprobs)
    )


def test_viterbi_equals_exhaustive_argmax(toy_model):
    model, lexprobs = toy_model
    for words in [["dogs", "see", "dogs"], ["the", "dog", "sees"], ["run", "run", "run"]]:
        best = brute_force_sequences(words, model, lexprobs)
        finite = [(s, t) for s, t in best if s > -math.inf]
        got = viterbi(words, model, lexprobs)
        assert got.score == pytest.approx(finite[0][0], abs=1e-9)
        assert tuple(got.tags) == finite[0][1]


def test_n_best_equals_exhaustive_top_n(toy_model):
    model, lexprobs = toy_model
    words = ["the", "dogs", "see"]
    expected = [(s, t) for s, t in brute_force_sequences(words, model, lexprobs) if s > -math.inf]
    got = n_best(words, model, lexprobs, 5)
    assert len(got) == min(5, len(expected))
    for seq, (score, tags) in zip(got, expected):
        assert seq.score == pytest.approx(score, abs=1e-9)
        assert tuple(seq.tags) == tags


def test_n_best_first_equals_viterbi(toy_model):
    model, lexprobs = toy_model
    for words in [["dogs"], ["the", "cat"], ["a", "dog", "sees", "cats"]]:
        top = n_best(words, model, lexprobs, 3)
        vit = viterbi(words, model, lexprobs)
        assert top[0].tags == vit.tags
        assert top[0].score == pytest.approx(vit.score, abs=1e-12)
        scores = [s.score for s in top]
        assert scores == sorted(scores, reverse=True)
        assert len({tuple(s.tags) for s in top}) == len(top)


def test_n_best_exhaustion(toy_model):
    model, lexprobs = toy_model
    finite = [
        (s, t) for s, t in brute_force_sequences(["dog"], model, lexprobs) if s > -math.inf
    ]
    got = n_best(["dog"], model, lexprobs, 100)
    assert len(got) == len(finite)
    assert [tuple(s.tags) for s in got] == [t for _, t in finite]


def test_unknown_words_get_open_class_emissions(toy_model):
    model, lexprobs = toy_model
    seq = viterbi(["the", "blork", "runs"], model, lexprobs)
    assert len(seq.tags) == 3
    assert lexprobs.emission("blork", "N") == pytest.approx(lexprobs.unknown_emission("N"))


def test_model_round_trip(toy_model):
    model, lexprobs = toy_model
    text = dump_model(model, lexprobs)
    model2, lexprobs2 = load_model(text)
    assert model2.lambdas == model.lambdas
    assert model2.trigram_counts == model.trigram_counts
    assert model2.bigram_counts == model.bigram_counts
    assert model2.unigram_counts == model.unigram_counts
    assert lexprobs2.word_tag_counts == lexprobs.word_tag_counts
    assert dump_model(model2, lexprobs2) == text
    words = ["a", "cat", "sees", "dogs"]
    assert viterbi(words, model2, lexprobs2).tags == viterbi(words, model, lexprobs).tags


# ---------------------------------------------------------------------------
# Blender


def entry(word, pos, *tags):
    return MorphEntry(word, word, pos, frozenset(tags))


def test_blend_intersection():
    morph = [[entry("books", "N", "pl"), entry("books", "V", "3sg")]]
    nbest = [TagSequence(["N"], -1.0)]
    out = blend(morph, nbest)
    assert [pos for pos, _ in out[0]] == ["N"]


def test_blend_fallback_on_empty_intersection():
    morph = [[entry("books", "N", "pl"), entry("books", "V", "3sg")]]
    nbest = [TagSequence(["Adj"], -1.0)]
    out = blend(morph, nbest)
    assert sorted(pos for pos, _ in out[0]) == ["N", "V"]


def test_blend_union_over_sequences():
    morph = [[entry("books", "N", "pl"), entry("books", "V", "3sg")]]
    nbest = [TagSequence(["N"], -1.0), TagSequence(["V"], -1.5)]
    out = blend(morph, nbest)
    assert sorted(pos for pos, _ in out[0]) == ["N", "V"]


def test_blend_length_mismatch():
    with pytest.raises(ValueError):
        blend([[entry("a", "D")]], [TagSequence(["D", "N"], -1.0)])


def test_blend_without_sequences_is_identity():
    morph = [[entry("books", "N", "pl"), entry("books", "V", "3sg")]]
    out = blend(morph, [])
    assert sorted(pos for pos, _ in out[0]) == ["N", "V"]

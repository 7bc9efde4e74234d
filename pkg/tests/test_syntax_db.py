import json
from pathlib import Path

import pytest

from ltagbench.errors import DuplicateError, NotFoundError
from ltagbench.features import parse_equations, parse_term
from ltagbench.morphology import MorphEntry
from ltagbench.syntax_db import SyntacticDatabase, SyntEntry

DATA = Path(__file__).parent.parent / "src" / "ltagbench" / "data"


def load_infl_map():
    raw = json.loads((DATA / "infl_features.json").read_text())
    return {tag: parse_term(text) for tag, text in raw.items()}


@pytest.fixture()
def synt(sample_grammar):
    return SyntacticDatabase.load_file(
        DATA / "sample.synt", sample_grammar, infl_map=load_infl_map()
    )


def entry(word, pos, *tags):
    return MorphEntry(word, word, pos, frozenset(tags))


def test_select_expands_family(synt):
    morph = MorphEntry("loves", "love", "V", frozenset(["3sg", "pres"]))
    out = synt.select("love", {("V", morph)}, surface="loves")
    assert [a.base for a in out] == ["alpha_Vnx1", "alpha_nx0Vnx1"]
    for a in out:
        assert a.lexemes == ("loves",)
        assert a.origin_pos == "V"
        v_node = a.instantiated.node_at(a.instantiated.anchors[0])
        assert v_node.bottom.get(("agr", "num")) == "sg"
        assert v_node.bottom.get("tense") == "pres"


def test_select_unknown_uses_default_map(synt):
    morph = MorphEntry("blork", "blork", "N", frozenset(["sg"]))
    out = synt.select("blork", {("N", morph)})
    assert [a.base for a in out] == ["alpha_NXN"]
    assert out[0].lexemes == ("blork",)


def test_select_drops_clashing_family_member(sample_grammar):
    # Node 0.0 carries top={..., case: nom} in the declarative member but
    # top={mode: base} in the imperative one: a case=acc equation clashes
    # with the former only, so exactly that member is dropped.
    def db_with(equation_text):
        return SyntacticDatabase(
            sample_grammar,
            entries=[
                SyntEntry(
                    "shout",
                    "V",
                    families=("Tnx0Vnx1",),
                    equations=tuple(parse_equations(equation_text)),
                )
            ],
            infl_map=load_infl_map(),
        )

    morph = MorphEntry("shout", "shout", "V", frozenset())
    out = db_with("0.0.top.case=acc").select("shout", {("V", morph)})
    assert [a.base for a in out] == ["alpha_Vnx1"]
    out = db_with("0.0.top.case=nom").select("shout", {("V", morph)})
    assert [a.base for a in out] == ["alpha_Vnx1", "alpha_nx0Vnx1"]


def test_select_installs_surface_form(synt):
    morph = MorphEntry("books", "book", "N", frozenset(["pl"]))
    out = synt.select("book", {("N", morph)}, surface="Books")
    assert out[0].lexemes == ("Books",)


def test_select_deterministic(synt):
    morph_entries = {
        ("V", MorphEntry("walks", "walk", "V", frozenset(["3sg", "pres"]))),
        ("N", MorphEntry("walks", "walk", "N", frozenset(["pl"]))),
    }
    a = synt.select("walk", morph_entries, surface="walks")
    b = synt.select("walk", morph_entries, surface="walks")
    assert a == b
    assert all(at.origin_pos in {"V", "N"} for at in a)


def test_insert_validates_names(synt):
    with pytest.raises(ValueError):
        synt.insert(SyntEntry("zz", "V", families=("NoSuchFamily",)))
    with pytest.raises(ValueError):
        synt.insert(SyntEntry("zz", "V", trees=("no_such_tree",)))
    with pytest.raises(ValueError):
        SyntEntry("zz", "V")  # selects nothing


def test_crud_cycle(synt):
    e = SyntEntry("zorp", "V", families=("Tnx0V",))
    synt.insert(e)
    with pytest.raises(DuplicateError):
        synt.insert(e)
    assert synt.entries_for("zorp", "V") == [e]
    synt.delete(e)
    with pytest.raises(NotFoundError):
        synt.delete(e)
    # deleted word falls back to the default map
    morph = MorphEntry("zorp", "zorp", "V", frozenset(["base"]))
    out = synt.select("zorp", {("V", morph)})
    assert {a.base for a in out} <= {"alpha_V", "alpha_Vnx1", "alpha_nx0V", "alpha_nx0Vnx1"}


def test_update(synt):
    old = synt.entries_for("run", "V")[0]
    new = SyntEntry("run", "V", families=("Tnx0V", "Tnx0Vnx1"))
    synt.update(old, new)
    assert synt.entries_for("run", "V") == [new]
    with pytest.raises(NotFoundError):
        synt.update(old, new)


def test_search(synt):
    assert any(e.index_word == "love" for e in synt.search("tree", "alpha_nx0Vnx1"))
    assert any(e.index_word == "walk" for e in synt.search("family", "Tnx0V"))
    assert {e.pos for e in synt.search("pos", "Det")} == {"Det"}
    assert [e.index_word for e in synt.search("root", "the")] == ["the"]
    with pytest.raises(ValueError):
        synt.search("bogus", "x")


def test_round_trip(synt, sample_grammar):
    text = synt.dumps()
    again = SyntacticDatabase.loads(text, sample_grammar, infl_map=load_infl_map())
    assert again == synt
    assert again.dumps() == text


def test_multiword_index(sample_grammar):
    db = SyntacticDatabase(
        sample_grammar,
        entries=[SyntEntry("kick the bucket", "V", families=("Tnx0V",))],
    )
    assert db.multiword_index_words() == ["kick the bucket"]


def test_default_map_covers_sample_pos(synt):
    for pos in ["N", "PropN", "V", "Det", "Adv", "Neg", "Punct"]:
        assert pos in synt.defaults

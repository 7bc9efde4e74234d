from pathlib import Path

import pytest

from ltagbench.errors import DuplicateError, NotFoundError
from ltagbench.morphology import (
    DefaultRules,
    MorphDatabase,
    MorphEntry,
    Morphology,
    default_entries,
    load_allowed_tags,
)

DATA = Path(__file__).parent.parent / "src" / "ltagbench" / "data"


@pytest.fixture(scope="module")
def rules():
    return DefaultRules.load_file(DATA / "morph_rules.json")


@pytest.fixture()
def db():
    return MorphDatabase.load_file(
        DATA / "sample.morph", allowed_tags=load_allowed_tags(DATA / "morph_rules.json")
    )


def entry(inflected, root, pos, *tags):
    return MorphEntry(inflected, root, pos, frozenset(tags))


def test_lookup_books(db):
    hits = db.lookup("books")
    assert entry("books", "book", "N", "pl") in hits
    assert entry("books", "book", "V", "3sg", "pres") in hits
    assert len(hits) == 2


def test_lookup_unknown(db):
    assert db.lookup("zzqx") == []


def test_lookup_case_fold(db):
    assert db.lookup("Books") == db.lookup("books")


def test_crud_cycle(db):
    e = entry("zorps", "zorp", "N", "pl")
    db.insert(e)
    assert e in db.lookup("zorps")
    with pytest.raises(DuplicateError):
        db.insert(e)
    db.delete(e)
    assert db.lookup("zorps") == []
    with pytest.raises(NotFoundError):
        db.delete(e)


def test_update_reflected_in_lookup(db):
    old = entry("books", "book", "N", "pl")
    new = entry("books", "book", "N", "pl", "sg")
    with pytest.raises(ValueError):
        # sg+pl both allowed for N, so use a genuinely bad tag to see validation
        db.update(old, entry("books", "book", "N", "happy"))
    db.update(old, new)
    assert new in db.lookup("books")
    assert old not in db.lookup("books")


def test_update_missing_entry(db):
    with pytest.raises(NotFoundError):
        db.update(entry("nope", "nope", "N", "sg"), entry("nope", "nope", "N", "pl"))


def test_allowed_tags_validated():
    db = MorphDatabase(allowed_tags={"N": {"sg", "pl"}})
    with pytest.raises(ValueError):
        db.insert(entry("dog", "dog", "N", "past"))
    db.insert(entry("dog", "dog", "N", "sg"))


def test_search_fields(db):
    roots = db.search("root", "book")
    assert {e.inflected for e in roots} == {"book", "books"}
    verbs = db.search("pos", "V")
    assert all(e.pos == "V" for e in verbs)
    prefix = db.search("inflected", "boo*")
    assert {e.inflected for e in prefix} == {"book", "books"}
    by_tag = db.search("inflection", "3sg")
    assert all("3sg" in e.inflections for e in by_tag)
    with pytest.raises(ValueError):
        db.search("nonsense", "x")


def test_search_deterministic_order(db):
    out = db.search("root", "book")
    assert out == sorted(out, key=MorphEntry.sort_key)


def test_round_trip(db):
    text = db.dumps()
    again = MorphDatabase.loads(text)
    assert again == db
    assert again.dumps() == text


def test_insert_delete_inverse(db):
    before = db.all_entries()
    e = entry("glork", "glork", "N", "sg")
    db.insert(e)
    db.delete(e)
    assert db.all_entries() == before


# ---------------------------------------------------------------------------
# Default entries


def test_default_capitalized(rules):
    assert default_entries("Grzymala", rules) == [
        entry("Grzymala", "Grzymala", "PropN")
    ]


def test_default_ed_suffix_with_undoubling(rules):
    assert default_entries("flibbed", rules) == [
        entry("flibbed", "flib", "V", "past"),
        entry("flibbed", "flibbed", "N", "sg"),
    ]


def test_default_fallback(rules):
    assert default_entries("blork", rules) == [
        entry("blork", "blork", "N", "sg"),
        entry("blork", "blork", "V", "base"),
    ]


def test_default_s_suffix(rules):
    assert default_entries("blexes", rules) == [
        entry("blexes", "blexe", "N", "pl"),
        entry("blexes", "blexe", "V", "3sg", "pres"),
    ]


def test_default_ly_suffix(rules):
    assert default_entries("blorkly", rules) == [entry("blorkly", "blorkly", "Adv")]


def test_defaults_never_empty_and_not_consulted_when_known(db, rules):
    morph = Morphology(db, rules)
    for word in ["books", "Run", "zzqx", "Grzymala", "walking"]:
        assert morph.analyses(word)
    assert morph.analyses("books") == db.lookup("books")


def test_concurrent_readers_see_complete_states(db):
    import threading

    stop = threading.Event()
    problems = []

    def reader():
        while not stop.is_set():
            hits = db.lookup("books")
            # always a complete pre- or post-state: 2 (original) or 3 entries
            if len(hits) not in (2, 3):
                problems.append(len(hits))

    threads = [threading.Thread(target=reader) for _ in range(4)]
    for t in threads:
        t.start()
    extra = entry("books", "books", "N", "pl")
    for _ in range(200):
        db.insert(extra)
        db.delete(extra)
    stop.set()
    for t in threads:
        t.join()
    assert problems == []
    assert len(db.lookup("books")) == 2

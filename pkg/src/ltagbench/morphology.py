"""Morphological analyzer and database: inflected form -> (root, POS, inflections).

Entries are indexed on the inflected surface form. Lookup is exact-match
first, then case-folded; words the database does not know fall through to a
configurable default-entry heuristic (capitalization and suffix rules) so the
pipeline always has candidates.

Text format, one entry per line, tab separated::

    books<TAB>book<TAB>N<TAB>pl
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

from .errors import DuplicateError, NotFoundError

SEARCH_FIELDS = ("inflected", "root", "pos", "inflection")


@dataclass(frozen=True)
class MorphEntry:
    inflected: str
    root: str
    pos: str
    inflections: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.inflected or not self.root:
            raise ValueError("inflected form and root must be non-empty")
        object.__setattr__(self, "inflections", frozenset(self.inflections))

    def sort_key(self):
        return (self.inflected, self.pos, self.root, tuple(sorted(self.inflections)))

    def line(self) -> str:
        fields = [self.inflected, self.root, self.pos]
        if self.inflections:
            fields.append(",".join(sorted(self.inflections)))
        return "\t".join(fields)

    @classmethod
    def from_line(cls, line: str) -> "MorphEntry":
        parts = line.rstrip("\n").split("\t")
        if len(parts) == 3:  # empty tag field may be omitted
            parts.append("")
        if len(parts) != 4:
            raise ValueError(f"morph entry needs 4 tab-separated fields: {line!r}")
        inflected, root, pos, tags = parts
        return cls(inflected, root, pos, frozenset(t for t in tags.split(",") if t))


class MorphDatabase:
    """Multi-valued index on the inflected form, with serialized writes.

    Mutations build a fresh index and swap it in atomically, so concurrent
    readers always see a complete pre- or post-state.
    """

    def __init__(self, entries=(), allowed_tags: dict[str, set[str]] | None = None):
        self.allowed_tags = {k: set(v) for k, v in (allowed_tags or {}).items()}
        self._lock = threading.Lock()
        self._index: dict[str, tuple[MorphEntry, ...]] = {}
        for e in entries:
            self.insert(e)

    def _check(self, entry: MorphEntry):
        allowed = self.allowed_tags.get(entry.pos)
        if allowed is not None:
            bad = entry.inflections - allowed
            if bad:
                raise ValueError(
                    f"inflections {sorted(bad)} not allowed for POS {entry.pos}"
                )

    def __len__(self):
        return sum(len(v) for v in self._index.values())

    def __eq__(self, other):
        return isinstance(other, MorphDatabase) and self.all_entries() == other.all_entries()

    def all_entries(self) -> list[MorphEntry]:
        return sorted(
            (e for bucket in self._index.values() for e in bucket),
            key=MorphEntry.sort_key,
        )

    # -- retrieval ----------------------------------------------------------

    def lookup(self, word: str) -> list[MorphEntry]:
        """Entries for the exact form; case-folded fallback for unseen forms."""
        hits = self._index.get(word)
        if hits is None:
            hits = self._index.get(word.lower(), ())
        return sorted(hits, key=MorphEntry.sort_key)

    def search(self, field: str, pattern: str) -> list[MorphEntry]:
        """Entries matching a literal (or trailing-``*`` prefix) on one field."""
        if field not in SEARCH_FIELDS:
            raise ValueError(f"unknown search field {field!r} (use one of {SEARCH_FIELDS})")
        prefix = pattern.endswith("*")
        needle = pattern[:-1] if prefix else pattern

        def values(e: MorphEntry):
            if field == "inflection":
                return sorted(e.inflections)
            return [getattr(e, field)]

        def matches(e: MorphEntry):
            return any(
                v.startswith(needle) if prefix else v == needle for v in values(e)
            )

        return [e for e in self.all_entries() if matches(e)]

    # -- maintenance ---------------------------------------------------------

    def insert(self, entry: MorphEntry):
        self._check(entry)
        with self._lock:
            bucket = self._index.get(entry.inflected, ())
            if entry in bucket:
                raise DuplicateError(f"entry already present: {entry.line()!r}")
            index = dict(self._index)
            index[entry.inflected] = bucket + (entry,)
            self._index = index

    def delete(self, entry: MorphEntry):
        with self._lock:
            bucket = self._index.get(entry.inflected, ())
            if entry not in bucket:
                raise NotFoundError(f"no such entry: {entry.line()!r}")
            index = dict(self._index)
            remaining = tuple(e for e in bucket if e != entry)
            if remaining:
                index[entry.inflected] = remaining
            else:
                del index[entry.inflected]
            self._index = index

    def update(self, entry: MorphEntry, replacement: MorphEntry):
        """Delete + insert, atomically with respect to readers."""
        self._check(replacement)
        with self._lock:
            bucket = self._index.get(entry.inflected, ())
            if entry not in bucket:
                raise NotFoundError(f"no such entry: {entry.line()!r}")
            new_bucket = self._index.get(replacement.inflected, ())
            if replacement in new_bucket and replacement != entry:
                raise DuplicateError(f"entry already present: {replacement.line()!r}")
            index = dict(self._index)
            remaining = tuple(e for e in bucket if e != entry)
            if remaining:
                index[entry.inflected] = remaining
            else:
                del index[entry.inflected]
            index[replacement.inflected] = index.get(replacement.inflected, ()) + (replacement,)
            self._index = index

    # -- persistence ---------------------------------------------------------

    def dumps(self) -> str:
        return "\n".join(e.line() for e in self.all_entries()) + "\n"

    @classmethod
    def loads(cls, text: str, allowed_tags=None) -> "MorphDatabase":
        db = cls(allowed_tags=allowed_tags)
        for line in text.splitlines():
            line = line.strip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            db.insert(MorphEntry.from_line(line))
        return db

    @classmethod
    def load_file(cls, path, allowed_tags=None) -> "MorphDatabase":
        with open(path, encoding="utf-8") as f:
            return cls.loads(f.read(), allowed_tags)

    def save_file(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.dumps())


# ---------------------------------------------------------------------------
# Default entries for unknown words


@dataclass
class SuffixRule:
    suffix: str
    min_stem: int
    undouble: bool
    entries: list[dict]  # {"form": "stem"|"word", "pos": ..., "tags": [...]}


@dataclass
class DefaultRules:
    proper_pos: str
    suffix_rules: list[SuffixRule]
    fallback: list[dict]

    @classmethod
    def from_json(cls, text: str) -> "DefaultRules":
        raw = json.loads(text)
        rules = [
            SuffixRule(
                r["suffix"],
                r.get("min_stem", 2),
                r.get("undouble", False),
                r["entries"],
            )
            for r in raw.get("suffixes", [])
        ]
        return cls(raw.get("proper_noun_pos", "PropN"), rules, raw["fallback"])

    @classmethod
    def load_file(cls, path) -> "DefaultRules":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


def load_allowed_tags(path) -> dict[str, set[str]]:
    """The POS -> permitted-inflection-tags table from a morph config file."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    return {k: set(v) for k, v in raw.get("allowed_tags", {}).items()}


def _strip(word: str, suffix: str, undouble: bool) -> str:
    stem = word[: -len(suffix)]
    if undouble and len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in "aeiou":
        stem = stem[:-1]
    return stem


def default_entries(word: str, rules: DefaultRules) -> list[MorphEntry]:
    """Heuristic analyses for a word the database does not know. Never empty."""
    if word[:1].isupper():
        return [MorphEntry(word, word, rules.proper_pos, frozenset())]
    for rule in rules.suffix_rules:
        if word.endswith(rule.suffix) and len(word) >= len(rule.suffix) + rule.min_stem:
            stem = _strip(word, rule.suffix, rule.undouble)
            out = []
            for spec in rule.entries:
                root = stem if spec.get("form", "stem") == "stem" else word
                out.append(MorphEntry(word, root, spec["pos"], frozenset(spec.get("tags", ()))))
            return out
    return [
        MorphEntry(word, word, spec["pos"], frozenset(spec.get("tags", ())))
        for spec in rules.fallback
    ]


class Morphology:
    """Analyzer facade: database lookup with default-entry fallback."""

    def __init__(self, db: MorphDatabase, rules: DefaultRules):
        self.db = db
        self.rules = rules

    def analyses(self, word: str) -> list[MorphEntry]:
        found = self.db.lookup(word)
        return found if found else default_entries(word, self.rules)

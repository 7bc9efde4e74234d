"""Syntactic database: (root word, POS) -> trees/families + feature equations.

Tree selection expands an entry's families into member trees, anchors each
tree with the word's surface form, applies the entry's lexical feature
equations and the inflection features contributed by the morphological
analysis, and silently drops trees the equations clash with. Words with no
entry for a surviving POS fall back to a per-POS default map.

Text format, tab separated (``@default`` rows populate the default map)::

    love<TAB>V<TAB>Tnx0Vnx1<TAB>
    these<TAB>Det<TAB>beta_Dnx<TAB>anchor.bot.agr.num=pl
    @default<TAB>N<TAB>alpha_NXN<TAB>
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .errors import DuplicateError, NotFoundError
from .features import FeatureEquation, FeatureStructure, Value, parse_equations
from .grammar import AnchoredTree, AnchorFailure, Grammar, anchor

SEARCH_FIELDS = ("root", "pos", "tree", "family")


@dataclass(frozen=True)
class SyntEntry:
    index_word: str
    pos: str
    trees: tuple[str, ...] = ()
    families: tuple[str, ...] = ()
    equations: tuple[FeatureEquation, ...] = ()

    def __post_init__(self):
        if not self.trees and not self.families:
            raise ValueError(f"entry for {self.index_word!r} selects nothing")

    def sort_key(self):
        return (self.index_word, self.pos, self.families, self.trees)

    def line(self) -> str:
        names = " ".join(list(self.families) + list(self.trees))
        fields = [self.index_word, self.pos, names]
        if self.equations:
            fields.append(", ".join(str(e) for e in self.equations))
        return "\t".join(fields)


def structure_to_equations(node, side: str, structure: FeatureStructure):
    """Flatten a feature structure into per-path equations on one node side."""
    out: list[FeatureEquation] = []

    def rec(value: Value, path: tuple[str, ...]):
        if isinstance(value, FeatureStructure) and value.pairs:
            for k, v in value.items():
                rec(v, path + (k,))
        elif path:
            out.append(FeatureEquation(node, side, path, value))

    rec(structure, ())
    return out


class SyntacticDatabase:
    """Entries indexed by (root form, POS); writes serialized and atomic."""

    def __init__(
        self,
        grammar: Grammar,
        entries=(),
        defaults: dict[str, list[str]] | None = None,
        infl_map: dict[str, FeatureStructure] | None = None,
    ):
        self.grammar = grammar
        self.defaults = {k: list(v) for k, v in (defaults or {}).items()}
        self.infl_map = dict(infl_map or {})
        self._lock = threading.Lock()
        self._index: dict[tuple[str, str], tuple[SyntEntry, ...]] = {}
        for e in entries:
            self.insert(e)

    def __eq__(self, other):
        return (
            isinstance(other, SyntacticDatabase)
            and self.all_entries() == other.all_entries()
            and self.defaults == other.defaults
        )

    def all_entries(self) -> list[SyntEntry]:
        return sorted(
            (e for bucket in self._index.values() for e in bucket),
            key=SyntEntry.sort_key,
        )

    def multiword_index_words(self) -> list[str]:
        return sorted({w for (w, _) in self._index if " " in w})

    # -- maintenance ---------------------------------------------------------

    def _validate(self, entry: SyntEntry):
        for name in entry.trees:
            if name not in self.grammar.trees:
                raise ValueError(f"unknown tree {name!r} in entry for {entry.index_word!r}")
        for name in entry.families:
            if name not in self.grammar.families:
                raise ValueError(
                    f"unknown family {name!r} in entry for {entry.index_word!r}"
                )

    def insert(self, entry: SyntEntry):
        self._validate(entry)
        key = (entry.index_word, entry.pos)
        with self._lock:
            bucket = self._index.get(key, ())
            if entry in bucket:
                raise DuplicateError(f"entry already present: {entry.line()!r}")
            index = dict(self._index)
            index[key] = bucket + (entry,)
            self._index = index

    def delete(self, entry: SyntEntry):
        key = (entry.index_word, entry.pos)
        with self._lock:
            bucket = self._index.get(key, ())
            if entry not in bucket:
                raise NotFoundError(f"no such entry: {entry.line()!r}")
            index = dict(self._index)
            remaining = tuple(e for e in bucket if e != entry)
            if remaining:
                index[key] = remaining
            else:
                del index[key]
            self._index = index

    def update(self, entry: SyntEntry, replacement: SyntEntry):
        self._validate(replacement)
        with self._lock:
            key = (entry.index_word, entry.pos)
            bucket = self._index.get(key, ())
            if entry not in bucket:
                raise NotFoundError(f"no such entry: {entry.line()!r}")
            index = dict(self._index)
            remaining = tuple(e for e in bucket if e != entry)
            if remaining:
                index[key] = remaining
            else:
                del index[key]
            new_key = (replacement.index_word, replacement.pos)
            new_bucket = index.get(new_key, ())
            if replacement in new_bucket:
                raise DuplicateError(f"entry already present: {replacement.line()!r}")
            index[new_key] = new_bucket + (replacement,)
            self._index = index

    def search(self, field: str, pattern: str) -> list[SyntEntry]:
        if field not in SEARCH_FIELDS:
            raise ValueError(f"unknown search field {field!r} (use one of {SEARCH_FIELDS})")
        prefix = pattern.endswith("*")
        needle = pattern[:-1] if prefix else pattern

        def values(e: SyntEntry):
            if field == "root":
                return [e.index_word]
            if field == "pos":
                return [e.pos]
            if field == "family":
                return list(e.families)
            # "tree": direct trees plus family members (what the entry selects)
            names = list(e.trees)
            for fam in e.families:
                names.extend(self.grammar.families[fam].trees)
            return names

        def matches(e: SyntEntry):
            return any(v.startswith(needle) if prefix else v == needle for v in values(e))

        return [e for e in self.all_entries() if matches(e)]

    # -- selection -----------------------------------------------------------

    def entries_for(self, root_word: str, pos: str) -> list[SyntEntry]:
        return sorted(self._index.get((root_word, pos), ()), key=SyntEntry.sort_key)

    def select(
        self,
        root_word: str,
        pos_candidates,
        surface: str | tuple[str, ...] | None = None,
    ) -> list[AnchoredTree]:
        """Anchored trees for one word given its surviving (POS, analysis) pairs.

        ``surface`` overrides the lexeme(s) installed at the anchors (the
        original sentence token); it defaults to the analysis' inflected form.
        Trees whose equations clash with the tree or do not address it are
        dropped silently.
        """
        out: list[AnchoredTree] = []
        for pos, morph in sorted(
            pos_candidates, key=lambda pm: (pm[0], pm[1].sort_key())
        ):
            lexeme = surface if surface is not None else morph.inflected
            lexemes = lexeme if isinstance(lexeme, tuple) else (lexeme,)
            infl_eqs = []
            for tag in sorted(morph.inflections):
                structure = self.infl_map.get(tag)
                if structure is not None:
                    infl_eqs.extend(structure_to_equations("anchor", "bot", structure))
            entries = self.entries_for(root_word, pos)
            if entries:
                for entry in entries:
                    names = list(entry.families) + list(entry.trees)
                    for tree_name in self.grammar.expand(names):
                        tree = self.grammar.trees[tree_name]
                        out.extend(
                            self._try_anchor(tree, lexemes, entry.equations, infl_eqs, pos)
                        )
            else:
                for name in self.defaults.get(pos, []):
                    for tree_name in self.grammar.expand([name]):
                        tree = self.grammar.trees[tree_name]
                        out.extend(self._try_anchor(tree, lexemes, (), infl_eqs, pos))
        unique: list[AnchoredTree] = []
        for at in sorted(out, key=lambda a: (a.base, a.origin_pos, a.lexemes)):
            if not any(at == seen for seen in unique):
                unique.append(at)
        return unique

    def _try_anchor(self, tree, lexemes, equations, infl_eqs, pos):
        if len(lexemes) != len(tree.anchors):
            return []
        try:
            return [anchor(tree, lexemes, list(equations) + infl_eqs, pos)]
        except (AnchorFailure, KeyError, ValueError):
            return []

    # -- persistence ---------------------------------------------------------

    def dumps(self) -> str:
        lines = [e.line() for e in self.all_entries()]
        for pos in sorted(self.defaults):
            lines.append("\t".join(["@default", pos, " ".join(self.defaults[pos]), ""]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, grammar: Grammar, infl_map=None) -> "SyntacticDatabase":
        db = cls(grammar, infl_map=infl_map)
        for line in text.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) == 3:  # empty equation field may be omitted
                parts.append("")
            if len(parts) != 4:
                raise ValueError(f"synt entry needs 4 tab-separated fields: {line!r}")
            word, pos, names_text, eq_text = parts
            names = names_text.split()
            if word == "@default":
                for name in names:
                    if name not in grammar.trees and name not in grammar.families:
                        raise ValueError(f"unknown name {name!r} in default map for {pos}")
                db.defaults[pos] = names
                continue
            trees = tuple(n for n in names if n in grammar.trees)
            families = tuple(n for n in names if n in grammar.families)
            unknown = [n for n in names if n not in grammar.trees and n not in grammar.families]
            if unknown:
                raise ValueError(f"unknown names {unknown} in entry for {word!r}")
            db.insert(SyntEntry(word, pos, trees, families, tuple(parse_equations(eq_text))))
        return db

    @classmethod
    def load_file(cls, path, grammar, infl_map=None) -> "SyntacticDatabase":
        with open(path, encoding="utf-8") as f:
            return cls.loads(f.read(), grammar, infl_map)

    def save_file(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.dumps())

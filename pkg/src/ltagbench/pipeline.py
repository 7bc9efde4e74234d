"""End-to-end orchestration: tokenize -> analyze -> tag/blend -> select ->
filter -> parse-with-retry, plus the workspace that owns the loaded
resources, interactive hand combination with undo, and configuration.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .features import UnifyFailure, parse_term, rename_variables, unify
from .grammar import (
    AnchoredTree,
    ElementaryTree,
    Grammar,
    TreeNode,
    anchor,
    load_grammar_file,
)
from .morphology import (
    DefaultRules,
    MorphDatabase,
    MorphEntry,
    Morphology,
    load_allowed_tags,
)
from .parser import ParseOutcome, parse
from .stats import StatsTable, parse_with_retry
from .syntax_db import SyntacticDatabase
from .tagger import blend, load_model, n_best

DATA_DIR = Path(__file__).parent / "data"

TAGGER_MODES = ("enabled", "disabled", "retry-on-failure")


# ---------------------------------------------------------------------------
# Tokenizer

_PUNCT = ".,!?;:()\"'"


class Tokenizer:
    """Whitespace + punctuation splitting with a contraction exception table."""

    def __init__(self, contractions: dict[str, list[str]] | None = None, generic_nt=True):
        self.contractions = dict(contractions or {})
        self.generic_nt = generic_nt

    @classmethod
    def load_file(cls, path) -> "Tokenizer":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        return cls(raw.get("contractions", {}), raw.get("generic_nt", True))

    def __call__(self, raw: str) -> list[str]:
        out: list[str] = []
        for chunk in raw.split():
            out.extend(self._split_chunk(chunk))
        return out

    def _split_chunk(self, chunk: str) -> list[str]:
        if not chunk:
            return []
        if chunk in self.contractions:
            return list(self.contractions[chunk])
        for p in _PUNCT:
            if chunk.endswith(p) and len(chunk) > 1:
                return self._split_chunk(chunk[:-1]) + [p]
            if chunk.startswith(p) and len(chunk) > 1:
                return [p] + self._split_chunk(chunk[1:])
        lower = chunk.lower()
        if self.generic_nt and lower.endswith("n't") and len(chunk) > 3:
            return [chunk[:-3], "n't"]
        return [chunk]


_default_tokenizer: Tokenizer | None = None


def tokenize(raw: str) -> list[str]:
    """Tokenize with the bundled contraction table."""
    global _default_tokenizer
    if _default_tokenizer is None:
        _default_tokenizer = Tokenizer.load_file(DATA_DIR / "tokenizer.json")
    return _default_tokenizer(raw)


# ---------------------------------------------------------------------------
# Configuration


@dataclass
class PipelineConfig:
    grammar_path: str
    morph_path: str
    synt_path: str
    stats_path: str
    tagger_model_path: str | None = None
    morph_rules_path: str = str(DATA_DIR / "morph_rules.json")
    infl_map_path: str = str(DATA_DIR / "infl_features.json")
    tokenizer_path: str = str(DATA_DIR / "tokenizer.json")
    start_category: str | None = None  # None: the grammar's default
    tagger_mode: str = "enabled"
    n_best: int = 3
    top_k: int = 3
    derivation_cap: int = 256
    feature_mode: str = "online"

    def __post_init__(self):
        if self.tagger_mode not in TAGGER_MODES:
            raise ValueError(f"tagger_mode must be one of {TAGGER_MODES}")
        for name in ("n_best", "top_k", "derivation_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in (
            "grammar_path", "morph_path", "synt_path", "stats_path",
            "morph_rules_path", "infl_map_path", "tokenizer_path",
        ):
            path = getattr(self, name)
            if path and not Path(path).exists():
                raise FileNotFoundError(f"{name}: no such file {path!r}")
        if self.tagger_model_path and not Path(self.tagger_model_path).exists():
            raise FileNotFoundError(f"tagger_model_path: {self.tagger_model_path!r}")

    @classmethod
    def sample(cls, **overrides) -> "PipelineConfig":
        """Configuration over the bundled sample grammar and databases."""
        defaults = dict(
            grammar_path=str(DATA_DIR / "sample_grammar.ltag"),
            morph_path=str(DATA_DIR / "sample.morph"),
            synt_path=str(DATA_DIR / "sample.synt"),
            stats_path=str(DATA_DIR / "sample.stats"),
            tagger_model_path=str(DATA_DIR / "sample.tagger"),
        )
        defaults.update(overrides)
        return cls(**defaults)

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        return cls(**raw)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def load_file(cls, path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


# ---------------------------------------------------------------------------
# Scratch trees (hand combination)


@dataclass
class ScratchTree:
    name: str
    root: TreeNode
    env: dict = field(default_factory=dict)
    foot_address: tuple[int, ...] | None = None

    def readdress(self):
        def walk(node, address):
            node.address = address
            for i, c in enumerate(node.children):
                walk(c, address + (i,))

        walk(self.root, ())

    def node_at(self, address):
        node = self.root
        for i in address:
            if i >= len(node.children):
                raise KeyError(f"no node at address {address}")
            node = node.children[i]
        return node

    def snapshot(self) -> "ScratchTree":
        return ScratchTree(self.name, self.root.copy(), dict(self.env), self.foot_address)


@dataclass
class CombineReport:
    ok: bool
    message: str
    failure_path: str | None = None
    left: str | None = None
    right: str | None = None


# ---------------------------------------------------------------------------
# Workspace


class Workspace:
    """All loaded resources plus named scratch trees for hand combination.

    Reads are lock-free; database CRUD and scratch-tree mutations serialize
    on the workspace lock.
    """

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.lock = threading.RLock()
        self.grammar: Grammar = load_grammar_file(config.grammar_path)
        allowed = load_allowed_tags(config.morph_rules_path)
        self.morph_db = MorphDatabase.load_file(config.morph_path, allowed_tags=allowed)
        self.morph_rules = DefaultRules.load_file(config.morph_rules_path)
        self.morphology = Morphology(self.morph_db, self.morph_rules)
        with open(config.infl_map_path, encoding="utf-8") as f:
            self.infl_map = {tag: parse_term(t) for tag, t in json.load(f).items()}
        self.synt_db = SyntacticDatabase.load_file(
            config.synt_path, self.grammar, infl_map=self.infl_map
        )
        self.stats = StatsTable.load_file(config.stats_path)
        self.tokenizer = Tokenizer.load_file(config.tokenizer_path)
        self.tagger_model = None
        self.lexprobs = None
        if config.tagger_model_path:
            with open(config.tagger_model_path, encoding="utf-8") as f:
                self.tagger_model, self.lexprobs = load_model(f.read())
        self.scratch: dict[str, ScratchTree] = {}
        self.undo_history: dict[str, list[ScratchTree]] = {}
        self._fresh = 0
        self._check_default_coverage()

    def _check_default_coverage(self):
        emittable = {e.pos for e in self.morph_db.all_entries()}
        emittable.add(self.morph_rules.proper_pos)
        for rule in self.morph_rules.suffix_rules:
            emittable.update(spec["pos"] for spec in rule.entries)
        emittable.update(spec["pos"] for spec in self.morph_rules.fallback)
        missing = sorted(emittable - set(self.synt_db.defaults))
        if missing:
            raise ValueError(
                f"default tree map lacks entries for morphology-emittable POS: {missing}"
            )

    @property
    def start_category(self) -> str:
        return self.config.start_category or self.grammar.default_start

    # -- pipeline ----------------------------------------------------------

    def analyses(self, word: str) -> list[MorphEntry]:
        return self.morphology.analyses(word)

    def _multiword_candidates(self, tokens: list[str]) -> dict[int, list[AnchoredTree]]:
        """Anchored trees for contiguous multiword index entries, by start position.

        Kept alongside the per-word candidates so the literal reading stays
        available; the anchors consume the unit's tokens positionally.
        """
        out: dict[int, list[AnchoredTree]] = {}
        for index_word in self.synt_db.multiword_index_words():
            unit = index_word.split()
            for start in range(len(tokens) - len(unit) + 1):
                if tokens[start : start + len(unit)] != unit:
                    continue
                surface = tuple(tokens[start : start + len(unit)])
                for pos in sorted({e.pos for e in self.synt_db.all_entries()
                                   if e.index_word == index_word}):
                    synthetic = MorphEntry(index_word, index_word, pos, frozenset())
                    found = self.synt_db.select(index_word, {(pos, synthetic)}, surface=surface)
                    if found:
                        out.setdefault(start, []).extend(found)
        return out

    def candidates_for(
        self, tokens: list[str], tagger_mode: str, n: int
    ) -> tuple[list[list[AnchoredTree]], dict]:
        """Per-word anchored-tree candidates plus per-stage diagnostics."""
        morph_lists = [self.analyses(w) for w in tokens]
        diagnostics: dict = {
            "tokens": list(tokens),
            "morph_counts": [len(m) for m in morph_lists],
            "tagger_mode": tagger_mode,
        }
        if tagger_mode == "enabled" and self.tagger_model is not None:
            sequences = n_best(tokens, self.tagger_model, self.lexprobs, n)
            blended = blend(morph_lists, sequences)
            diagnostics["tag_sequences"] = [
                {"tags": list(s.tags), "score": s.score} for s in sequences
            ]
        else:
            blended = [[(e.pos, e) for e in analyses] for analyses in morph_lists]
        diagnostics["blended_counts"] = [len(b) for b in blended]

        multiword = self._multiword_candidates(tokens)
        candidates: list[list[AnchoredTree]] = []
        for i, (token, pairs) in enumerate(zip(tokens, blended)):
            by_root: dict[str, set] = {}
            for pos, entry in pairs:
                by_root.setdefault(entry.root, set()).add((pos, entry))
            found: list[AnchoredTree] = list(multiword.get(i, []))
            for root in sorted(by_root):
                found.extend(self.synt_db.select(root, by_root[root], surface=token))
            candidates.append(found)
        diagnostics["candidate_counts"] = [len(c) for c in candidates]
        return candidates, diagnostics

    def run_pipeline(self, raw: str, **overrides) -> ParseOutcome:
        """Run the full pipeline over one sentence; linguistic failure is data."""
        cfg = self.config
        mode = overrides.get("tagger_mode", cfg.tagger_mode)
        if mode not in TAGGER_MODES:
            raise ValueError(f"tagger_mode must be one of {TAGGER_MODES}")
        n = overrides.get("n_best", cfg.n_best)
        k = overrides.get("top_k", cfg.top_k)
        start = overrides.get("start_category", self.start_category)
        cap = overrides.get("derivation_cap", cfg.derivation_cap)
        feature_mode = overrides.get("feature_mode", cfg.feature_mode)

        tokens = self.tokenizer(raw)
        if not tokens:
            return ParseOutcome([], [], [], "none", 0.0, diagnostics={"tokens": []})

        first_mode = "enabled" if mode == "retry-on-failure" else mode
        outcome = self._single_pass(tokens, first_mode, n, k, start, cap, feature_mode)
        if mode == "retry-on-failure" and not outcome.parsed:
            tagged_diag = outcome.diagnostics
            tagged_timing = dict(outcome.timing)
            outcome = self._single_pass(tokens, "disabled", n, k, start, cap, feature_mode)
            outcome.diagnostics["tagged_pass"] = tagged_diag
            outcome.timing["tagged_pass_total"] = tagged_timing.get("total", 0.0)
            outcome.diagnostics["tagger_retry"] = True
        return outcome

    def _single_pass(self, tokens, tagger_mode, n, k, start, cap, feature_mode):
        candidates, diagnostics = self.candidates_for(tokens, tagger_mode, n)
        outcome = parse_with_retry(
            tokens,
            candidates,
            start,
            self.stats,
            k=k,
            parser=parse,
            derivation_cap=cap,
            feature_mode=feature_mode,
        )
        outcome.diagnostics = diagnostics
        return outcome

    # -- scratch trees -------------------------------------------------------

    def _instantiate(self, tree_name: str, lexemes=None) -> ElementaryTree:
        base = self.grammar.trees.get(tree_name)
        if base is None:
            raise KeyError(f"unknown tree {tree_name!r}")
        if lexemes:
            inst = anchor(base, lexemes, [], "").instantiated
        else:
            inst = base.copy()
        self._fresh += 1
        suffix = f"s{self._fresh}"
        table: dict = {}
        for node in inst.nodes():
            node.top = rename_variables(node.top, suffix, table)
            node.bottom = rename_variables(node.bottom, suffix, table)
        return inst

    def scratch_new(self, name: str, tree_name: str, lexemes=None) -> ScratchTree:
        with self.lock:
            if name in self.scratch:
                raise ValueError(f"scratch tree {name!r} already exists")
            inst = self._instantiate(tree_name, lexemes)
            tree = ScratchTree(name, inst.root, {}, inst.foot)
            tree.readdress()
            self.scratch[name] = tree
            self.undo_history[name] = []
            return tree

    def scratch_delete(self, name: str):
        with self.lock:
            self.scratch.pop(name, None)
            self.undo_history.pop(name, None)

    def hand_combine(
        self,
        target: str,
        address: tuple[int, ...],
        source_tree: str,
        op: str,
        lexemes=None,
    ) -> CombineReport:
        """Substitute or adjoin a grammar tree at a node of a scratch tree.

        On unification failure the scratch tree is unchanged and the report
        names the failing feature path; that diagnostic is the point.
        """
        if op not in ("substitution", "adjunction"):
            raise ValueError("op must be substitution or adjunction")
        with self.lock:
            if target not in self.scratch:
                raise KeyError(f"no scratch tree {target!r}")
            scratch = self.scratch[target]
            try:
                site = scratch.node_at(address)
            except KeyError:
                raise KeyError(f"no node at address {address} in {target!r}") from None
            base = self.grammar.trees.get(source_tree)
            if base is None:
                raise KeyError(f"unknown tree {source_tree!r}")
            if op == "substitution":
                if site.kind != "subst":
                    raise ValueError("substitution is only defined at substitution nodes")
                if base.tree_type != "initial":
                    raise ValueError("only initial trees substitute")
            else:
                if site.kind == "subst":
                    raise ValueError("adjunction at a substitution node is not defined")
                if base.tree_type != "auxiliary":
                    raise ValueError("only auxiliary trees adjoin")
            inst = self._instantiate(source_tree, lexemes)
            if site.category != inst.root.category:
                raise ValueError(
                    f"category mismatch: {site.category} vs {inst.root.category}"
                )

            backup = scratch.snapshot()
            env = dict(scratch.env)
            r = unify(site.top, inst.root.top, env)
            if isinstance(r, UnifyFailure):
                return CombineReport(
                    False, r.message(), ".".join(r.path), str(r.left), str(r.right)
                )
            merged_top, env = r
            if op == "substitution":
                site.top = merged_top
                site.bottom = inst.root.bottom
                site.children = inst.root.children
                site.kind = inst.root.kind
                site.lexeme = inst.root.lexeme
            else:
                foot_node = inst.node_at(inst.foot)
                r2 = unify(site.bottom, foot_node.bottom, env)
                if isinstance(r2, UnifyFailure):
                    return CombineReport(
                        False, r2.message(), ".".join(r2.path), str(r2.left), str(r2.right)
                    )
                foot_bottom, env = r2
                moved_children = site.children
                moved_kind = site.kind
                moved_lexeme = site.lexeme
                site.top = merged_top
                site.bottom = inst.root.bottom
                site.children = inst.root.children
                site.kind = inst.root.kind
                site.lexeme = inst.root.lexeme
                foot_node.children = moved_children
                foot_node.kind = moved_kind if moved_kind != "foot" else "interior"
                foot_node.lexeme = moved_lexeme
                foot_node.bottom = foot_bottom
            self.undo_history[target].append(backup)
            scratch.env = env
            scratch.readdress()
            return CombineReport(True, "combined")

    def scratch_undo(self, name: str) -> ScratchTree:
        with self.lock:
            history = self.undo_history.get(name)
            if not history:
                raise ValueError(f"nothing to undo for {name!r}")
            restored = history.pop()
            self.scratch[name] = restored
            return restored


def load_workspace(config: PipelineConfig | None = None) -> Workspace:
    return Workspace(config or PipelineConfig.sample())

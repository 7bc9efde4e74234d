"""HTTP API over a workspace, consumed by the browser workbench.

All bodies are JSON. Endpoints are deterministic given workspace state;
database writes and scratch-tree edits serialize on the workspace lock.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .errors import DuplicateError, NotFoundError
from .export import export_tree, view_of
from .features import parse_equations, parse_gorn
from .grammar import dump_tree
from .morphology import MorphEntry
from .parser import ParseOutcome, count_constituents
from .pipeline import PipelineConfig, Workspace
from .syntax_db import SyntEntry


# -- JSON shapes -------------------------------------------------------------


def view_json(view) -> dict:
    return {
        "label": view.label,
        "glyph": view.glyph,
        "word": view.word,
        "top": view.top,
        "bottom": view.bottom,
        "children": [view_json(c) for c in view.children],
    }


def morph_json(e: MorphEntry) -> dict:
    return {
        "inflected": e.inflected,
        "root": e.root,
        "pos": e.pos,
        "inflections": sorted(e.inflections),
    }


def synt_json(e: SyntEntry) -> dict:
    return {
        "index_word": e.index_word,
        "pos": e.pos,
        "trees": list(e.trees),
        "families": list(e.families),
        "equations": [str(eq) for eq in e.equations],
    }


def outcome_json(o: ParseOutcome) -> dict:
    return {
        "tokens": o.tokens,
        "parsed": o.parsed,
        "pass": o.pass_,
        "seconds": o.seconds,
        "timing": o.timing,
        "truncated": o.truncated,
        "diagnostics": o.diagnostics,
        "derivations": [
            {
                "expr": d.expr(),
                "bracketed": t.bracketed(),
                "constituents": count_constituents(t),
                "tree": view_json(view_of(t)),
            }
            for d, t in zip(o.derivations, o.derived_trees)
        ],
    }


class ParseRequest(BaseModel):
    sentence: str
    tagger_mode: str | None = None
    n_best: int | None = None
    top_k: int | None = None
    start_category: str | None = None


class TagRequest(BaseModel):
    sentence: str
    n_best: int = 3


class MorphEntryBody(BaseModel):
    inflected: str
    root: str
    pos: str
    inflections: list[str] = Field(default_factory=list)

    def to_entry(self) -> MorphEntry:
        return MorphEntry(self.inflected, self.root, self.pos, frozenset(self.inflections))


class MorphUpdateBody(BaseModel):
    old: MorphEntryBody
    new: MorphEntryBody


class SyntEntryBody(BaseModel):
    index_word: str
    pos: str
    trees: list[str] = Field(default_factory=list)
    families: list[str] = Field(default_factory=list)
    equations: list[str] = Field(default_factory=list)

    def to_entry(self) -> SyntEntry:
        eqs = []
        for text in self.equations:
            eqs.extend(parse_equations(text))
        return SyntEntry(
            self.index_word, self.pos, tuple(self.trees), tuple(self.families), tuple(eqs)
        )


class SyntUpdateBody(BaseModel):
    old: SyntEntryBody
    new: SyntEntryBody


class CombineRequest(BaseModel):
    target: str
    address: str  # surface Gorn form, e.g. "0.1"
    source: str
    op: str  # "substitution" | "adjunction"
    lexemes: list[str] | None = None


class ScratchRequest(BaseModel):
    name: str
    tree: str
    lexemes: list[str] | None = None


class UndoRequest(BaseModel):
    name: str


def _http(e: Exception) -> HTTPException:
    if isinstance(e, NotFoundError):
        return HTTPException(404, str(e))
    if isinstance(e, DuplicateError):
        return HTTPException(409, str(e))
    if isinstance(e, KeyError):
        return HTTPException(404, str(e.args[0]) if e.args else "not found")
    return HTTPException(422, str(e))


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="ltagbench workbench service")
    state = {"ws": workspace}

    def ws() -> Workspace:
        return state["ws"]

    # -- parsing -------------------------------------------------------------

    @app.post("/parse")
    def parse_endpoint(req: ParseRequest) -> dict:
        overrides: dict[str, Any] = {}
        if req.tagger_mode is not None:
            overrides["tagger_mode"] = req.tagger_mode
        if req.n_best is not None:
            overrides["n_best"] = req.n_best
        if req.top_k is not None:
            overrides["top_k"] = req.top_k
        if req.start_category is not None:
            overrides["start_category"] = req.start_category
        try:
            return outcome_json(ws().run_pipeline(req.sentence, **overrides))
        except ValueError as e:
            raise _http(e) from None

    @app.post("/tag")
    def tag_endpoint(req: TagRequest) -> dict:
        w = ws()
        if w.tagger_model is None:
            raise HTTPException(422, "no tagger model configured")
        if req.n_best < 1:
            raise HTTPException(422, "n_best must be >= 1")
        tokens = w.tokenizer(req.sentence)
        from .tagger import n_best as run_n_best

        sequences = run_n_best(tokens, w.tagger_model, w.lexprobs, req.n_best)
        return {
            "tokens": tokens,
            "sequences": [{"tags": list(s.tags), "score": s.score} for s in sequences],
        }

    # -- morphological database ----------------------------------------------

    @app.get("/db/morph/entries")
    def morph_entries(word: str | None = None) -> list[dict]:
        db = ws().morph_db
        entries = db.lookup(word) if word is not None else db.all_entries()
        return [morph_json(e) for e in entries]

    @app.post("/db/morph/entries", status_code=201)
    def morph_insert(body: MorphEntryBody) -> dict:
        try:
            ws().morph_db.insert(body.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.put("/db/morph/entries")
    def morph_update(body: MorphUpdateBody) -> dict:
        try:
            ws().morph_db.update(body.old.to_entry(), body.new.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.delete("/db/morph/entries")
    def morph_delete(body: MorphEntryBody) -> dict:
        try:
            ws().morph_db.delete(body.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.get("/db/morph/search")
    def morph_search(field: str, pattern: str) -> list[dict]:
        try:
            return [morph_json(e) for e in ws().morph_db.search(field, pattern)]
        except ValueError as e:
            raise _http(e) from None

    # -- syntactic database ----------------------------------------------------

    @app.get("/db/synt/entries")
    def synt_entries(word: str | None = None, pos: str | None = None) -> list[dict]:
        db = ws().synt_db
        if word is not None and pos is not None:
            return [synt_json(e) for e in db.entries_for(word, pos)]
        entries = db.all_entries()
        if word is not None:
            entries = [e for e in entries if e.index_word == word]
        return [synt_json(e) for e in entries]

    @app.post("/db/synt/entries", status_code=201)
    def synt_insert(body: SyntEntryBody) -> dict:
        try:
            ws().synt_db.insert(body.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.put("/db/synt/entries")
    def synt_update(body: SyntUpdateBody) -> dict:
        try:
            ws().synt_db.update(body.old.to_entry(), body.new.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.delete("/db/synt/entries")
    def synt_delete(body: SyntEntryBody) -> dict:
        try:
            ws().synt_db.delete(body.to_entry())
        except ValueError as e:
            raise _http(e) from None
        return {"ok": True}

    @app.get("/db/synt/search")
    def synt_search(field: str, pattern: str) -> list[dict]:
        try:
            return [synt_json(e) for e in ws().synt_db.search(field, pattern)]
        except ValueError as e:
            raise _http(e) from None

    # -- grammar ----------------------------------------------------------------

    @app.get("/grammar/trees")
    def grammar_trees(name: str | None = None) -> dict:
        g = ws().grammar
        if name is not None:
            tree = g.trees.get(name)
            if tree is None:
                raise HTTPException(404, f"unknown tree {name!r}")
            return {
                "name": name,
                "type": tree.tree_type,
                "text": dump_tree(tree),
                "tree": view_json(view_of(tree)),
            }
        return {
            "start": g.default_start,
            "categories": sorted(g.categories),
            "trees": {
                n: {"type": t.tree_type, "anchors": len(t.anchors)}
                for n, t in sorted(g.trees.items())
            },
            "families": {n: list(f.trees) for n, f in sorted(g.families.items())},
        }

    # -- workspace: scratch trees and hand combination ---------------------------

    @app.get("/workspace/scratch")
    def scratch_list() -> dict:
        w = ws()
        return {
            name: view_json(view_of(tree.root)) for name, tree in sorted(w.scratch.items())
        }

    @app.post("/workspace/scratch", status_code=201)
    def scratch_new(req: ScratchRequest) -> dict:
        try:
            tree = ws().scratch_new(req.name, req.tree, req.lexemes)
        except (KeyError, ValueError) as e:
            raise _http(e) from None
        return {"name": req.name, "tree": view_json(view_of(tree.root))}

    @app.post("/workspace/combine")
    def combine(req: CombineRequest) -> dict:
        try:
            address = parse_gorn(req.address)
            report = ws().hand_combine(
                req.target, address, req.source, req.op, req.lexemes
            )
        except (KeyError, ValueError) as e:
            raise _http(e) from None
        tree = ws().scratch[req.target]
        return {
            "ok": report.ok,
            "message": report.message,
            "failure_path": report.failure_path,
            "left": report.left,
            "right": report.right,
            "tree": view_json(view_of(tree.root)),
        }

    @app.post("/workspace/undo")
    def undo(req: UndoRequest) -> dict:
        try:
            tree = ws().scratch_undo(req.name)
        except ValueError as e:
            raise _http(e) from None
        return {"name": req.name, "tree": view_json(view_of(tree.root))}

    # -- export, stats, config ----------------------------------------------------

    @app.get("/export/{tree_name}")
    def export(tree_name: str, format: str = "text") -> dict:
        w = ws()
        if tree_name in w.scratch:
            target = w.scratch[tree_name].root
        elif tree_name in w.grammar.trees:
            target = w.grammar.trees[tree_name]
        else:
            raise HTTPException(404, f"unknown tree {tree_name!r}")
        try:
            return {"name": tree_name, "format": format, "document": export_tree(target, format)}
        except ValueError as e:
            raise _http(e) from None

    @app.get("/stats")
    def stats() -> dict:
        table = ws().stats
        return {
            "counts": [
                {"pos": pos, "tree": tree, "count": n}
                for (pos, tree), n in sorted(table.counts.items())
            ]
        }

    @app.get("/config")
    def get_config() -> dict:
        return ws().config.to_dict()

    @app.put("/config")
    def put_config(body: dict) -> dict:
        merged = ws().config.to_dict()
        unknown = set(body) - set(merged)
        if unknown:
            raise HTTPException(422, f"unknown config fields: {sorted(unknown)}")
        merged.update(body)
        try:
            state["ws"] = Workspace(PipelineConfig.from_dict(merged))
        except (ValueError, FileNotFoundError) as e:
            raise HTTPException(422, str(e)) from None
        return state["ws"].config.to_dict()

    return app

"""Command-line front end.

Workspace resolution: --workspace PATH (a config JSON file, or a directory
containing workspace.json), else the LTAGBENCH_WORKSPACE environment
variable, else the bundled sample workspace.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .evaluation import corpus_report, load_gold, parse_bands
from .export import export_tree
from .morphology import MorphEntry
from .parser import count_constituents
from .pipeline import PipelineConfig, Workspace
from .stats import collect
from .syntax_db import SyntEntry
from .tagger import dump_model, n_best, train

TAGGER_FLAG = {"on": "enabled", "off": "disabled", "retry": "retry-on-failure"}


def resolve_config(path_arg: str | None) -> PipelineConfig:
    path = path_arg or os.environ.get("LTAGBENCH_WORKSPACE")
    if not path:
        return PipelineConfig.sample()
    p = Path(path)
    if p.is_dir():
        p = p / "workspace.json"
    return PipelineConfig.load_file(p)


def add_workspace_arg(sub):
    sub.add_argument("--workspace", help="config JSON file or directory with workspace.json")


def cmd_parse(args) -> int:
    ws = Workspace(resolve_config(args.workspace))
    overrides = {}
    if args.tagger:
        overrides["tagger_mode"] = TAGGER_FLAG[args.tagger]
    if args.n_best:
        overrides["n_best"] = args.n_best
    if args.top_k:
        overrides["top_k"] = args.top_k
    if args.start:
        overrides["start_category"] = args.start
    outcome = ws.run_pipeline(args.sentence, **overrides)
    if args.format == "json":
        from .service import outcome_json

        print(json.dumps(outcome_json(outcome), indent=2))
        return 0
    print(f"tokens: {' '.join(outcome.tokens)}")
    print(f"pass: {outcome.pass_}  derivations: {len(outcome.derivations)}")
    for i, (d, t) in enumerate(zip(outcome.derivations, outcome.derived_trees), 1):
        print(f"[{i}] {d.expr()}")
        if args.format == "bracketed":
            print(f"    {t.bracketed()}")
        else:
            print(f"    {t.bracketed()}")
            print(f"    constituents: {count_constituents(t)}")
    if not outcome.parsed:
        counts = outcome.diagnostics.get("candidate_counts")
        if counts:
            per_word = ", ".join(
                f"{w}:{n}" for w, n in zip(outcome.tokens, counts)
            )
            print(f"no parse (after {outcome.pass_}); candidates per word: {per_word}")
        else:
            print("no parse")
    return 0 if outcome.parsed else 1


def cmd_eval(args) -> int:
    ws = Workspace(resolve_config(args.workspace))
    gold = load_gold(Path(args.gold).read_text(encoding="utf-8"))
    outcomes = []
    for g in gold:
        outcomes.append(ws.run_pipeline(" ".join(g.tokens)))
    report = corpus_report(
        outcomes,
        gold=gold,
        bands=parse_bands(args.bands) if args.bands else None,
        labeled=args.labeled,
        drop_preterminals=args.drop_preterminals,
        selection="first" if args.first_parse else "best",
    )
    print(report.render())
    return 0


def _morph_entry_from_args(args) -> MorphEntry:
    tags = frozenset(t for t in (args.tags or "").split(",") if t)
    return MorphEntry(args.inflected, args.root, args.pos, tags)


def _save_morph(ws: Workspace):
    ws.morph_db.save_file(ws.config.morph_path)


def _save_synt(ws: Workspace):
    ws.synt_db.save_file(ws.config.synt_path)


def cmd_db(args) -> int:
    ws = Workspace(resolve_config(args.workspace))
    if args.database == "morph":
        db = ws.morph_db
        if args.action == "lookup":
            for e in db.lookup(args.word):
                print(e.line())
        elif args.action == "insert":
            db.insert(_morph_entry_from_args(args))
            _save_morph(ws)
        elif args.action == "delete":
            db.delete(_morph_entry_from_args(args))
            _save_morph(ws)
        elif args.action == "update":
            db.update(MorphEntry.from_line(args.old), MorphEntry.from_line(args.new))
            _save_morph(ws)
        elif args.action == "search":
            for e in db.search(args.field, args.pattern):
                print(e.line())
    else:
        db = ws.synt_db
        if args.action == "lookup":
            entries = [e for e in db.all_entries() if e.index_word == args.word]
            for e in entries:
                print(e.line())
        elif args.action == "insert":
            db.insert(_synt_entry_from_args(args, ws))
            _save_synt(ws)
        elif args.action == "delete":
            db.delete(_synt_entry_from_args(args, ws))
            _save_synt(ws)
        elif args.action == "update":
            old = _synt_entry_from_line(args.old, ws)
            new = _synt_entry_from_line(args.new, ws)
            db.update(old, new)
            _save_synt(ws)
        elif args.action == "search":
            for e in db.search(args.field, args.pattern):
                print(e.line())
    return 0


def _synt_entry_from_args(args, ws: Workspace) -> SyntEntry:
    from .features import parse_equations

    names = (args.names or "").split()
    trees = tuple(n for n in names if n in ws.grammar.trees)
    families = tuple(n for n in names if n in ws.grammar.families)
    unknown = [n for n in names if n not in ws.grammar.trees and n not in ws.grammar.families]
    if unknown:
        raise ValueError(f"unknown tree/family names: {unknown}")
    return SyntEntry(
        args.word, args.pos, trees, families, tuple(parse_equations(args.equations or ""))
    )


def _synt_entry_from_line(line: str, ws: Workspace) -> SyntEntry:
    from .features import parse_equations

    parts = line.split("\t")
    if len(parts) == 3:
        parts.append("")
    word, pos, names_text, eq_text = parts
    names = names_text.split()
    return SyntEntry(
        word,
        pos,
        tuple(n for n in names if n in ws.grammar.trees),
        tuple(n for n in names if n in ws.grammar.families),
        tuple(parse_equations(eq_text)),
    )


def cmd_stats(args) -> int:
    ws = Workspace(resolve_config(args.workspace))
    if args.action == "show":
        sys.stdout.write(ws.stats.dumps())
        return 0
    # collect: parse a corpus file and accumulate (POS, tree) counts
    sentences = []
    for line in Path(args.corpus).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("*"):
            continue
        sentences.append(line)
    per_sentence = []
    for s in sentences:
        outcome = ws.run_pipeline(s, tagger_mode="disabled")
        per_sentence.append(outcome.derivations)
    table = collect(per_sentence, per_sentence=args.per_sentence)
    output = args.output or ws.config.stats_path
    table.save_file(output)
    print(f"collected {sum(table.counts.values())} tree uses over {len(sentences)} sentences")
    print(f"written to {output}")
    return 0


def cmd_tag(args) -> int:
    if args.action == "train":
        corpus = []
        for line in Path(args.corpus).read_text(encoding="utf-8").splitlines():
            if line.strip():
                corpus.append([tuple(tok.rsplit("/", 1)) for tok in line.split()])
        model, lexprobs = train(corpus)
        Path(args.output).write_text(dump_model(model, lexprobs), encoding="utf-8")
        print(f"trained on {len(corpus)} sentences; lambdas {model.lambdas}")
        return 0
    ws = Workspace(resolve_config(args.workspace))
    if ws.tagger_model is None:
        print("no tagger model configured", file=sys.stderr)
        return 2
    tokens = ws.tokenizer(args.sentence)
    for seq in n_best(tokens, ws.tagger_model, ws.lexprobs, args.n_best):
        tagged = " ".join(f"{w}/{t}" for w, t in zip(tokens, seq.tags))
        print(f"{seq.score:.4f}  {tagged}")
    return 0


def cmd_export(args) -> int:
    ws = Workspace(resolve_config(args.workspace))
    tree = ws.grammar.trees.get(args.tree)
    if tree is None:
        print(f"unknown tree {args.tree!r}", file=sys.stderr)
        return 2
    document = export_tree(tree, args.format)
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
    else:
        sys.stdout.write(document)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ws = Workspace(resolve_config(args.workspace))
    uvicorn.run(create_app(ws), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ltagbench",
        description="Lexicalized TAG workbench: parse, evaluate, maintain databases",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="run the full pipeline on one sentence")
    sp.add_argument("sentence")
    sp.add_argument("--start", help="start category (default: grammar's)")
    sp.add_argument("--tagger", choices=sorted(TAGGER_FLAG), help="POS tagger mode")
    sp.add_argument("--n-best", type=int, dest="n_best")
    sp.add_argument("--top-k", type=int, dest="top_k")
    sp.add_argument("--format", choices=["text", "json", "bracketed"], default="text")
    add_workspace_arg(sp)
    sp.set_defaults(func=cmd_parse)

    se = sub.add_parser("eval", help="parse gold sentences and score bracketings")
    se.add_argument("--gold", required=True, help="file of bracketed sentences")
    se.add_argument("--bands", help="length bands, e.g. 1-10,1-15")
    se.add_argument("--labeled", action="store_true")
    se.add_argument("--drop-preterminals", action="store_true")
    se.add_argument("--first-parse", action="store_true", help="score the first parse")
    add_workspace_arg(se)
    se.set_defaults(func=cmd_eval)

    def add_db_actions(parent, fixed_database=None):
        if fixed_database is None:
            parent.add_argument("database", choices=["morph", "synt"])
        db_sub = parent.add_subparsers(dest="action", required=True)
        for action in ["lookup", "insert", "delete", "update", "search"]:
            sa = db_sub.add_parser(action)
            if action == "lookup":
                sa.add_argument("word")
            elif action in ("insert", "delete"):
                sa.add_argument("--inflected", help="morph: inflected form")
                sa.add_argument("--root")
                sa.add_argument("--pos", required=True)
                sa.add_argument("--tags", help="morph: comma-separated inflection tags")
                sa.add_argument("--word", help="synt: index word")
                sa.add_argument("--names", help="synt: space-separated trees/families")
                sa.add_argument("--equations", help="synt: comma-separated equations")
            elif action == "update":
                sa.add_argument("--old", required=True, help="tab-separated entry line")
                sa.add_argument("--new", required=True, help="tab-separated entry line")
            else:
                sa.add_argument("--field", required=True)
                sa.add_argument("--pattern", required=True)
            add_workspace_arg(sa)
            if fixed_database is not None:
                sa.set_defaults(database=fixed_database)
        parent.set_defaults(func=cmd_db)

    add_db_actions(sub.add_parser("db", help="database maintenance"))
    # direct aliases: `ltagbench morph lookup ...` == `ltagbench db morph lookup ...`
    add_db_actions(sub.add_parser("morph", help="morphological database"), "morph")
    add_db_actions(sub.add_parser("synt", help="syntactic database"), "synt")

    ss = sub.add_parser("stats", help="tree-frequency statistics")
    st_sub = ss.add_subparsers(dest="action", required=True)
    sc = st_sub.add_parser("collect")
    sc.add_argument("--corpus", required=True)
    sc.add_argument("--output")
    sc.add_argument("--per-sentence", action="store_true", dest="per_sentence")
    add_workspace_arg(sc)
    sh = st_sub.add_parser("show")
    add_workspace_arg(sh)
    ss.set_defaults(func=cmd_stats)

    stg = sub.add_parser("tag", help="train or run the POS tagger")
    tag_sub = stg.add_subparsers(dest="action", required=True)
    tt = tag_sub.add_parser("train")
    tt.add_argument("--corpus", required=True, help="word/TAG tokens, one sentence per line")
    tt.add_argument("--output", required=True)
    tr = tag_sub.add_parser("run")
    tr.add_argument("sentence")
    tr.add_argument("--n-best", type=int, default=3, dest="n_best")
    add_workspace_arg(tr)
    stg.set_defaults(func=cmd_tag)

    sx = sub.add_parser("export", help="export a grammar tree")
    sx.add_argument("tree")
    sx.add_argument("--format", choices=["text", "svg", "bracketed"], default="text")
    sx.add_argument("--output")
    add_workspace_arg(sx)
    sx.set_defaults(func=cmd_export)

    sv = sub.add_parser("serve", help="start the workbench HTTP service")
    sv.add_argument("--port", type=int, default=8077)
    sv.add_argument("--host", default="127.0.0.1")
    add_workspace_arg(sv)
    sv.set_defaults(func=cmd_serve)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

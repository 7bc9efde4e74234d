"""Chart parser for lexicalized TAG with substitution and adjunction.

The algorithm is an Earley-style dotted-tree scheme. Every node of every
candidate tree instance is traversed left-above -> left-below -> (children)
-> right-below -> right-above; an item records a tree use, a dotted node
position, and spans ``(i, p, q, j)`` where ``p..q`` is the foot gap once the
use's foot has been crossed. Each node owns a subtree chain (LB at some start
position through RB) and a bridging pair (LA arrival / RA departure) in its
parent's chain; the bridge closes either by null adjunction (LA + RB with
adjacent spans) or by adjunction (LA + completed auxiliary root + RB filling
the auxiliary's foot gap), which makes at-most-one-adjunction-per-node
structural. Derivations are read back off the chart and every candidate
derivation is replayed through the unification regime: combination checks
prune branches online and a final top/bottom collapse accepts or rejects.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .features import (
    EMPTY,
    FeatureStructure,
    UnifyFailure,
    fold_unify,
    format_gorn,
    rename_variables,
    resolve,
    unify,
)
from .grammar import AnchoredTree

LA, LB, RB, RA = "la", "lb", "rb", "ra"


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    """One way of composing elementary trees: who attached where, by which op."""

    tree: str
    lexemes: tuple[str, ...]
    origin_pos: str
    ops: tuple[tuple[tuple[int, ...], str, "Derivation"], ...] = ()
    anchored: AnchoredTree | None = field(default=None, compare=False, repr=False)
    uid: int = field(default=-1, compare=False, repr=False)

    def key(self):
        return (
            self.tree,
            self.lexemes,
            self.origin_pos,
            tuple((addr, op, child.key()) for addr, op, child in self.ops),
        )

    def ident(self):
        """Use-aware identity: distinguishes homograph feature variants."""
        return (
            self.tree,
            self.lexemes,
            self.origin_pos,
            self.uid,
            tuple((addr, op, child.ident()) for addr, op, child in self.ops),
        )

    def walk(self):
        yield self
        for _, _, child in self.ops:
            yield from child.walk()

    def expr(self) -> str:
        """Nested s-expression text form."""
        head = f"{self.tree}[{' '.join(self.lexemes)}]"
        parts = [f"({op}@{format_gorn(addr)} {child.expr()})" for addr, op, child in self.ops]
        return "(" + " ".join([head] + parts) + ")"


@dataclass
class DerivedNode:
    """A node of the derived phrase-structure tree; leaves are word nodes."""

    label: str
    top: FeatureStructure = field(default_factory=FeatureStructure)
    bottom: FeatureStructure = field(default_factory=FeatureStructure)
    features: FeatureStructure = field(default_factory=FeatureStructure)
    children: list["DerivedNode"] = field(default_factory=list)
    word: str | None = None

    def is_leaf(self) -> bool:
        return not self.children

    def fringe(self) -> list[str]:
        if self.is_leaf():
            return [self.word] if self.word is not None else []
        out: list[str] = []
        for c in self.children:
            out.extend(c.fringe())
        return out

    def bracketed(self) -> str:
        if self.is_leaf():
            return self.word if self.word is not None else self.label
        return "(" + self.label + " " + " ".join(c.bracketed() for c in self.children) + ")"


def count_constituents(tree: DerivedNode) -> int:
    """Internal (non-leaf) node count of a derived tree."""
    if tree.is_leaf():
        return 0
    return 1 + sum(count_constituents(c) for c in tree.children)


@dataclass
class ParseOutcome:
    tokens: list[str]
    derivations: list[Derivation]
    derived_trees: list[DerivedNode]
    pass_: str  # "filtered" | "retry" | "none"
    seconds: float
    timing: dict = field(default_factory=dict)
    truncated: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def parsed(self) -> bool:
        return bool(self.derivations)


class ChartItem(NamedTuple):
    """Dotted-tree state: tree use, node address, dot side, spans (i, p, q, j)."""

    use: int
    addr: tuple[int, ...]
    pos: str
    i: int
    p: int | None
    q: int | None
    j: int


class _Use:
    __slots__ = ("uid", "anchored", "pin", "nodes", "root_cat", "is_initial", "foot_addr")

    def __init__(self, uid: int, anchored: AnchoredTree, pin: dict):
        self.uid = uid
        self.anchored = anchored
        self.pin = pin  # anchor address -> required token position
        tree = anchored.instantiated
        self.nodes = {}
        for node in tree.nodes():
            self.nodes[node.address] = node
        self.root_cat = tree.root.category
        self.is_initial = tree.tree_type == "initial"
        self.foot_addr = tree.foot


def _merge_gap(a: tuple, b: tuple) -> tuple:
    (p1, q1), (p2, q2) = a, b
    if p1 is None:
        return (p2, q2)
    assert p2 is None, "two foot gaps in one chain"
    return (p1, q1)


class _Chart:
    def __init__(self, tokens: list[str], uses: list[_Use], start: str):
        self.tokens = tokens
        self.n = len(tokens)
        self.uses = uses
        self.start = start
        self.ways: dict[ChartItem, list[tuple]] = {}
        self.agenda: deque[ChartItem] = deque()
        self.done: set[ChartItem] = set()

        # Join indexes, keyed by the information the partner rule matches on.
        self.la_by_key = {}        # (use, addr, j) -> [LA items]
        self.la_site_by_edge = {}  # (j, category) -> [LA items at adjoinable nodes]
        self.la_subst_by_edge = {} # (j, category) -> [LA items at substitution nodes]
        self.rb_by_key = {}        # (use, addr, i) -> [RB items]
        self.rb_by_startcat = {}   # (i, category) -> [RB items]
        self.foot_lb_by_loc = {}   # (m, category) -> [foot LB items]
        self.init_ra_by_edge = {}  # (i, category) -> [completed initial root RA]
        self.aux_ra_by_edge = {}   # (i, category) -> [completed auxiliary root RA]
        self.aux_ra_by_gap = {}    # (p, q, category) -> [completed auxiliary root RA]

        # Adjunction sites by category, precomputed over all uses.
        self.sites_by_cat: dict[str, list[tuple[int, tuple[int, ...]]]] = {}
        for use in uses:
            for addr, node in use.nodes.items():
                if node.kind != "subst":
                    self.sites_by_cat.setdefault(node.category, []).append((use.uid, addr))
        self.aux_uses_by_cat: dict[str, list[_Use]] = {}
        self.init_uses_by_cat: dict[str, list[_Use]] = {}
        for use in uses:
            table = self.init_uses_by_cat if use.is_initial else self.aux_uses_by_cat
            table.setdefault(use.root_cat, []).append(use)

    def node(self, item: ChartItem):
        return self.uses[item.use].nodes[item.addr]

    def add(self, item: ChartItem, way: tuple):
        known = self.ways.get(item)
        if known is None:
            self.ways[item] = [way]
            self.agenda.append(item)
        elif way not in known:
            known.append(way)

    def run(self):
        for use in self.init_uses_by_cat.get(self.start, []):
            self.add(ChartItem(use.uid, (), LA, 0, None, None, 0), ("start",))
        while self.agenda:
            item = self.agenda.popleft()
            if item in self.done:
                continue
            self.done.add(item)
            self.process(item)

    # -- rule dispatch ------------------------------------------------------

    def process(self, item: ChartItem):
        if item.pos == LA:
            self.process_la(item)
        elif item.pos == LB:
            self.process_lb(item)
        elif item.pos == RB:
            self.process_rb(item)
        else:
            self.process_ra(item)

    def process_la(self, item: ChartItem):
        node = self.node(item)
        cat = node.category
        j = item.j
        self.la_by_key.setdefault((item.use, item.addr, j), []).append(item)

        if node.kind == "subst":
            self.la_subst_by_edge.setdefault((j, cat), []).append(item)
            for use in self.init_uses_by_cat.get(cat, []):
                self.add(ChartItem(use.uid, (), LA, j, None, None, j), ("start",))
            for root_ra in self.init_ra_by_edge.get((j, cat), []):
                self.complete_subst(item, root_ra)
            return

        self.la_site_by_edge.setdefault((j, cat), []).append(item)
        # Null-adjunction path: the subtree starts where we arrived.
        self.add(ChartItem(item.use, item.addr, LB, j, None, None, j), ("start",))
        # Adjunction path: predict auxiliaries rooted here.
        for use in self.aux_uses_by_cat.get(cat, []):
            self.add(ChartItem(use.uid, (), LA, j, None, None, j), ("start",))
        for rb in self.rb_by_key.get((item.use, item.addr, j), []):
            self.complete_null(item, rb)
        for aux_ra in self.aux_ra_by_edge.get((j, cat), []):
            for rb in self.rb_by_key.get((item.use, item.addr, aux_ra.p), []):
                if rb.j == aux_ra.q:
                    self.complete_adjoin(item, rb, aux_ra)

    def process_lb(self, item: ChartItem):
        node = self.node(item)
        m = item.j
        if node.kind == "interior":
            self.add(
                ChartItem(item.use, item.addr + (0,), LA, m, None, None, m), ("child", item)
            )
        elif node.kind == "anchor":
            use = self.uses[item.use]
            pinned = use.pin.get(item.addr)
            if m < self.n and self.tokens[m] == node.lexeme and pinned in (None, m):
                self.add(
                    ChartItem(item.use, item.addr, RB, m, None, None, m + 1), ("scan", item)
                )
        elif node.kind == "foot":
            self.foot_lb_by_loc.setdefault((m, node.category), []).append(item)
            for site_use, site_addr in self.sites_by_cat.get(node.category, []):
                self.add(ChartItem(site_use, site_addr, LB, m, None, None, m), ("start",))
            for rb in self.rb_by_startcat.get((m, node.category), []):
                self.complete_foot(item, rb)

    def process_rb(self, item: ChartItem):
        node = self.node(item)
        cat = node.category
        self.rb_by_key.setdefault((item.use, item.addr, item.i), []).append(item)
        self.rb_by_startcat.setdefault((item.i, cat), []).append(item)

        for la in self.la_by_key.get((item.use, item.addr, item.i), []):
            self.complete_null(la, item)
        for foot_lb in self.foot_lb_by_loc.get((item.i, cat), []):
            self.complete_foot(foot_lb, item)
        for aux_ra in self.aux_ra_by_gap.get((item.i, item.j, cat), []):
            for la in self.la_by_key.get((item.use, item.addr, aux_ra.i), []):
                self.complete_adjoin(la, item, aux_ra)

    def process_ra(self, item: ChartItem):
        use = self.uses[item.use]
        if item.addr == ():
            cat = use.root_cat
            if use.is_initial:
                self.init_ra_by_edge.setdefault((item.i, cat), []).append(item)
                for la in self.la_subst_by_edge.get((item.i, cat), []):
                    self.complete_subst(la, item)
            else:
                assert item.p is not None, "auxiliary completed without a foot gap"
                self.aux_ra_by_edge.setdefault((item.i, cat), []).append(item)
                self.aux_ra_by_gap.setdefault((item.p, item.q, cat), []).append(item)
                for la in self.la_site_by_edge.get((item.i, cat), []):
                    for rb in self.rb_by_key.get((la.use, la.addr, item.p), []):
                        if rb.j == item.q:
                            self.complete_adjoin(la, rb, item)
            return
        parent = item.addr[:-1]
        idx = item.addr[-1]
        siblings = len(use.nodes[parent].children)
        if idx + 1 < siblings:
            self.add(
                ChartItem(item.use, parent + (idx + 1,), LA, item.i, item.p, item.q, item.j),
                ("child", item),
            )
        else:
            self.add(
                ChartItem(item.use, parent, RB, item.i, item.p, item.q, item.j),
                ("rb", item),
            )

    # -- completions --------------------------------------------------------

    def complete_null(self, la: ChartItem, rb: ChartItem):
        p, q = _merge_gap((la.p, la.q), (rb.p, rb.q))
        self.add(
            ChartItem(la.use, la.addr, RA, la.i, p, q, rb.j), ("null", la, rb)
        )

    def complete_subst(self, la: ChartItem, root_ra: ChartItem):
        self.add(
            ChartItem(la.use, la.addr, RA, la.i, la.p, la.q, root_ra.j),
            ("subst", la, root_ra),
        )

    def complete_adjoin(self, la: ChartItem, rb: ChartItem, aux_ra: ChartItem):
        p, q = _merge_gap((la.p, la.q), (rb.p, rb.q))
        self.add(
            ChartItem(la.use, la.addr, RA, la.i, p, q, aux_ra.j),
            ("adjoin", la, rb, aux_ra),
        )

    def complete_foot(self, foot_lb: ChartItem, site_rb: ChartItem):
        self.add(
            ChartItem(foot_lb.use, foot_lb.addr, RB, foot_lb.j, site_rb.i, site_rb.j, site_rb.j),
            ("foot", foot_lb, site_rb),
        )

    def goal_items(self) -> list[ChartItem]:
        out = []
        for use in self.init_uses_by_cat.get(self.start, []):
            item = ChartItem(use.uid, (), RA, 0, None, None, self.n)
            if item in self.ways:
                out.append(item)
        return out


class _Budget:
    """Caps structural enumeration work. Exhaustion truncates, never discards."""

    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def step(self) -> bool:
        self.spent += 1
        return self.spent <= self.limit


class _Lazy:
    """Memoized generator: replays the produced prefix, pulls more on demand."""

    __slots__ = ("_gen", "_items")

    def __init__(self, gen):
        self._gen = gen
        self._items: list = []

    def __iter__(self):
        i = 0
        while True:
            while i < len(self._items):
                yield self._items[i]
                i += 1
            if self._gen is None:
                return
            try:
                self._items.append(next(self._gen))
            except StopIteration:
                self._gen = None


class _Enumerator:
    """Reads structural derivations back off the chart (no features yet).

    Enumeration is lazy and memoized per chart item, so complete derivations
    stream out depth-first instead of materializing whole child lists; the
    budget charges one step per distinct op-sequence, and on exhaustion the
    already-produced prefix stands.
    """

    def __init__(self, chart: _Chart, budget: _Budget):
        self.chart = chart
        self.budget = budget
        self.exhausted = False
        self.chain_memo: dict[ChartItem, _Lazy] = {}
        self.use_memo: dict[ChartItem, _Lazy] = {}

    def use_derivations(self, root_ra: ChartItem) -> _Lazy:
        if root_ra not in self.use_memo:
            self.use_memo[root_ra] = _Lazy(self._derivation_gen(root_ra))
        return self.use_memo[root_ra]

    def _derivation_gen(self, root_ra: ChartItem):
        use = self.chart.uses[root_ra.use]
        seen = set()
        for ops in self.chain(root_ra):
            d = Derivation(
                use.anchored.base,
                use.anchored.lexemes,
                use.anchored.origin_pos,
                tuple(sorted(ops, key=lambda o: (o[0], o[1], o[2].key()))),
                anchored=use.anchored,
                uid=use.uid,
            )
            k = d.ident()
            if k not in seen:
                seen.add(k)
                yield d

    def chain(self, item: ChartItem) -> _Lazy:
        """Op-sequences accumulated along the chain ending at this item."""
        if item not in self.chain_memo:
            self.chain_memo[item] = _Lazy(self._chain_gen(item))
        return self.chain_memo[item]

    def _chain_gen(self, item: ChartItem):
        seen: set[tuple] = set()

        def fresh(ops: tuple) -> bool:
            key = tuple((a, o, c.ident()) for a, o, c in ops)
            if key in seen:
                return False
            if not self.budget.step():
                self.exhausted = True
                return False
            seen.add(key)
            return True

        for way in self.chart.ways[item]:
            if self.exhausted:
                return
            rule = way[0]
            if rule == "start":
                if fresh(()):
                    yield ()
            elif rule in ("child", "rb", "scan", "foot"):
                for ops in self.chain(way[1]):
                    if self.exhausted:
                        return
                    if fresh(ops):
                        yield ops
            elif rule == "null":
                _, la, rb = way
                for left in self.chain(la):
                    for inner in self.chain(rb):
                        if self.exhausted:
                            return
                        ops = left + inner
                        if fresh(ops):
                            yield ops
            elif rule == "subst":
                _, la, root_ra = way
                for child in self.use_derivations(root_ra):
                    op = ((item.addr, "subst", child),)
                    for left in self.chain(la):
                        if self.exhausted:
                            return
                        ops = left + op
                        if fresh(ops):
                            yield ops
            elif rule == "adjoin":
                _, la, rb, aux_ra = way
                for child in self.use_derivations(aux_ra):
                    op = ((item.addr, "adjoin", child),)
                    for left in self.chain(la):
                        for inner in self.chain(rb):
                            if self.exhausted:
                                return
                            ops = left + inner + op
                            if fresh(ops):
                                yield ops
            else:  # pragma: no cover
                raise AssertionError(f"unknown way {rule}")


# ---------------------------------------------------------------------------
# Feature replay over a structural derivation


class _BNode:
    __slots__ = ("label", "kind", "tops", "bottoms", "children", "word")

    def __init__(self, label, kind, tops, bottoms, children, word=None):
        self.label = label
        self.kind = kind
        self.tops = tops
        self.bottoms = bottoms
        self.children = children
        self.word = word


class _Reject(Exception):
    def __init__(self, failure):
        self.failure = failure


class _Replay:
    def __init__(self, eager: bool):
        self.eager = eager
        self.env: dict = {}
        self.counter = 0

    def check(self, parts: list[FeatureStructure]):
        if self.eager and len(parts) > 1:
            r = fold_unify(parts, self.env)
            if isinstance(r, UnifyFailure):
                raise _Reject(r)
            self.env = r[1]

    def build(self, d: Derivation) -> tuple[_BNode, _BNode | None]:
        if d.anchored is None:
            raise DerivationError(f"derivation node {d.tree} has no anchored tree attached")
        self.counter += 1
        suffix = str(self.counter)
        table: dict = {}
        tree = d.anchored.instantiated
        node_map: dict[tuple[int, ...], _BNode] = {}

        def copy(node) -> _BNode:
            b = _BNode(
                node.category,
                node.kind,
                [rename_variables(node.top, suffix, table)],
                [rename_variables(node.bottom, suffix, table)],
                [copy(c) for c in node.children],
            )
            if node.kind == "anchor":
                if node.lexeme is None:
                    raise DerivationError(f"unanchored anchor node in {d.tree}")
                b.children.append(_BNode(node.lexeme, "word", [], [], [], node.lexeme))
            node_map[node.address] = b
            return b

        root = copy(tree.root)
        foot_ref = node_map.get(tree.foot) if tree.foot is not None else None

        adjoined: set[tuple[int, ...]] = set()
        for addr, op, child in d.ops:
            site = node_map.get(addr)
            if site is None:
                raise DerivationError(
                    f"derivation targets missing address {format_gorn(addr)} in {d.tree}"
                )
            c_root, c_foot = self.build(child)
            if op == "subst":
                if site.kind != "subst":
                    raise DerivationError(
                        f"substitution at non-substitution node {format_gorn(addr)}"
                    )
                if c_foot is not None:
                    raise DerivationError("substitution of an auxiliary tree")
                if c_root.label != site.label:
                    raise DerivationError(
                        f"substitution category mismatch at {format_gorn(addr)}"
                    )
                site.tops = site.tops + c_root.tops
                site.bottoms = site.bottoms + c_root.bottoms
                site.children = c_root.children
                site.word = c_root.word
                site.kind = "filled"
                self.check(site.tops)
            elif op == "adjoin":
                if site.kind == "subst":
                    raise DerivationError(
                        f"adjunction at substitution node {format_gorn(addr)}"
                    )
                if c_foot is None:
                    raise DerivationError("adjunction of an initial tree")
                if c_root.label != site.label:
                    raise DerivationError(
                        f"adjunction category mismatch at {format_gorn(addr)}"
                    )
                if addr in adjoined:
                    raise DerivationError(
                        f"second adjunction at node {format_gorn(addr)}"
                    )
                adjoined.add(addr)
                moved_bottoms = site.bottoms
                moved_children = site.children
                moved_word = site.word
                site.tops = site.tops + c_root.tops
                site.bottoms = c_root.bottoms
                site.children = c_root.children
                site.word = c_root.word
                c_foot.bottoms = c_foot.bottoms + moved_bottoms
                c_foot.children = moved_children
                c_foot.word = moved_word
                self.check(site.tops)
                self.check(c_foot.bottoms)
                if site is foot_ref:
                    foot_ref = c_foot
            else:
                raise DerivationError(f"unknown operation {op!r}")
        return root, foot_ref

    def finish(self, root: _BNode) -> DerivedNode:
        collapsed: list[tuple[_BNode, FeatureStructure, FeatureStructure, FeatureStructure]] = []

        def walk(b: _BNode, address):
            if b.kind == "word":
                collapsed.append((b, EMPTY, EMPTY, EMPTY))
                for i, c in enumerate(b.children):
                    walk(c, address + (i,))
                return
            r = fold_unify(b.tops, self.env)
            if isinstance(r, UnifyFailure):
                raise _Reject(r)
            top, self.env = r
            r = fold_unify(b.bottoms, self.env)
            if isinstance(r, UnifyFailure):
                raise _Reject(r)
            bottom, self.env = r
            r = unify(
                top if isinstance(top, FeatureStructure) else EMPTY,
                bottom if isinstance(bottom, FeatureStructure) else EMPTY,
                self.env,
            )
            if isinstance(r, UnifyFailure):
                raise _Reject(r)
            merged, self.env = r
            collapsed.append((b, top, bottom, merged))
            for i, c in enumerate(b.children):
                walk(c, address + (i,))

        walk(root, ())

        finished: dict[int, DerivedNode] = {}
        for b, top, bottom, merged in collapsed:
            finished[id(b)] = DerivedNode(
                b.label,
                resolve(top, self.env),
                resolve(bottom, self.env),
                resolve(merged, self.env),
                [],
                b.word,
            )

        def attach(b: _BNode) -> DerivedNode:
            node = finished[id(b)]
            node.children = [attach(c) for c in b.children]
            return node

        return attach(root)


def replay_derivation(d: Derivation, feature_mode: str = "online") -> DerivedNode | None:
    """Build and feature-check a derivation; DerivedNode on success, None on clash.

    ``feature_mode`` "online" applies combination unifications as operations
    are replayed; "finalize" defers every check to the end-of-derivation
    collapse. Both accept exactly the same derivations.
    """
    replay = _Replay(eager=feature_mode == "online")
    try:
        root, _ = replay.build(d)
        return replay.finish(root)
    except _Reject:
        return None


def extract_derived(d: Derivation, feature_mode: str = "online") -> DerivedNode:
    """The unique derived tree of a well-formed derivation.

    Raises DerivationError for structurally malformed derivations and for
    feature-clashing ones.
    """
    replay = _Replay(eager=feature_mode == "online")
    try:
        root, _ = replay.build(d)
        return replay.finish(root)
    except _Reject as r:
        raise DerivationError(f"unification failure: {r.failure.message()}") from None


def _dedup_uses(tokens, candidates) -> list[_Use]:
    uses: list[_Use] = []
    seen_at: dict[int, list[AnchoredTree]] = {}
    for w, trees in enumerate(candidates):
        bucket = seen_at.setdefault(w, [])
        for anchored in trees:
            if any(prev == anchored for prev in bucket):
                continue
            bucket.append(anchored)
            pin = {}
            if anchored.instantiated.anchors:
                pin[anchored.instantiated.anchors[0]] = w
            uses.append(_Use(len(uses), anchored, pin))
    return uses


def parse(
    tokens: list[str],
    candidates: list[list[AnchoredTree]],
    start: str,
    derivation_cap: int = 256,
    feature_mode: str = "online",
    structural_budget: int | None = None,
) -> ParseOutcome:
    """All derivations of ``tokens`` from per-word candidate trees.

    Empty input and inputs with no derivation yield an outcome with
    ``pass_ == "none"``; absence of parses is data, not an error.
    """
    t0 = time.perf_counter()
    if feature_mode not in ("online", "finalize"):
        raise ValueError(f"unknown feature mode {feature_mode!r}")
    if len(candidates) != len(tokens):
        raise ValueError("one candidate list per token required")
    derivations: list[Derivation] = []
    trees: list[DerivedNode] = []
    truncated = False
    if tokens:
        uses = _dedup_uses(tokens, candidates)
        chart = _Chart(tokens, uses, start)
        chart.run()
        budget = _Budget(structural_budget or max(50_000, derivation_cap * 64))
        enum = _Enumerator(chart, budget)
        structural: list[Derivation] = []
        for goal in chart.goal_items():
            structural.extend(enum.use_derivations(goal))
            if enum.exhausted:
                break
        truncated = enum.exhausted
        structural.sort(key=Derivation.key)
        # Key-equal derivations can arise from homograph candidates (same
        # tree, same lexemes, different features): a derivation counts once,
        # and it counts iff some feature-consistent reading validates.
        accepted = set()
        for idx, d in enumerate(structural):
            k = d.key()
            if k in accepted:
                continue
            node = replay_derivation(d, feature_mode)
            if node is None:
                continue
            accepted.add(k)
            derivations.append(d)
            trees.append(node)
            if len(derivations) >= derivation_cap:
                truncated = truncated or idx + 1 < len(structural)
                break
    seconds = time.perf_counter() - t0
    return ParseOutcome(
        list(tokens),
        derivations,
        trees,
        "filtered" if derivations else "none",
        seconds,
        {"parse": seconds},
        truncated,
    )


def recognize(tokens, candidates, start) -> bool:
    """True iff at least one derivation exists; stops at the first valid one."""
    if not tokens:
        return False
    uses = _dedup_uses(tokens, candidates)
    chart = _Chart(tokens, uses, start)
    chart.run()
    goals = chart.goal_items()
    if not goals:
        return False
    enum = _Enumerator(chart, _Budget(1_000_000))
    for goal in goals:
        for d in enum.use_derivations(goal):
            if replay_derivation(d) is not None:
                return True
    return False

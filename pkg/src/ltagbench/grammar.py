"""Elementary trees, tree families, anchoring, and the grammar file format.

A grammar file is line oriented and versioned::

    ltag-grammar v1
    start S

    tree alpha_nx0Vnx1 initial
    0     S  interior top={} bot={mode: ind}
    0.0   NP subst    top={agr: ?AGR, case: nom}
    0.1   VP interior top={mode: ind, agr: ?AGR} bot={mode: ?VM, agr: ?VA}
    0.1.0 V  anchor   top={mode: ?VM, agr: ?VA} bot={}
    0.1.1 NP subst    top={case: acc}

    family Tnx0Vnx1: alpha_nx0Vnx1 alpha_Vnx1

Gorn addresses are tuples of child indices internally (root = empty tuple);
the surface form prefixes the root segment "0", so node (1, 0) prints as
"0.1.0". Node kinds: interior, anchor, subst, foot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .features import (
    FeatureEquation,
    FeatureStructure,
    UnifyFailure,
    format_gorn,
    format_term,
    parse_gorn,
    parse_term,
    resolve,
    unify,
)

Category = str

KINDS = ("interior", "anchor", "subst", "foot")


class GrammarSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GrammarValidationError(ValueError):
    def __init__(self, tree: str, rule: str):
        super().__init__(f"tree {tree!r}: {rule}")
        self.tree = tree
        self.rule = rule


class AnchorFailure(ValueError):
    """A lexical feature equation is incompatible with the selected tree."""

    def __init__(self, tree: str, equation: FeatureEquation, failure: UnifyFailure):
        super().__init__(f"tree {tree!r}, equation {equation}: {failure.message()}")
        self.tree = tree
        self.equation = equation
        self.failure = failure


@dataclass
class TreeNode:
    """One node of an elementary tree."""

    address: tuple[int, ...]
    category: Category
    kind: str
    top: FeatureStructure = field(default_factory=FeatureStructure)
    bottom: FeatureStructure = field(default_factory=FeatureStructure)
    children: list["TreeNode"] = field(default_factory=list)
    lexeme: str | None = None  # set on anchor nodes by anchoring

    def copy(self) -> "TreeNode":
        return TreeNode(
            self.address,
            self.category,
            self.kind,
            FeatureStructure(self.top.pairs),
            FeatureStructure(self.bottom.pairs),
            [c.copy() for c in self.children],
            self.lexeme,
        )

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class ElementaryTree:
    name: str
    tree_type: str  # "initial" | "auxiliary"
    root: TreeNode
    anchors: list[tuple[int, ...]] = field(default_factory=list)
    foot: tuple[int, ...] | None = None

    @classmethod
    def from_root(cls, name: str, tree_type: str, root: TreeNode) -> "ElementaryTree":
        anchors = [n.address for n in root.walk() if n.kind == "anchor"]
        feet = [n.address for n in root.walk() if n.kind == "foot"]
        return cls(name, tree_type, root, anchors, feet[0] if feet else None)

    def node_at(self, address: tuple[int, ...]) -> TreeNode:
        node = self.root
        for i in address:
            if i >= len(node.children):
                raise KeyError(f"no node at {format_gorn(address)} in {self.name}")
            node = node.children[i]
        return node

    def nodes(self):
        yield from self.root.walk()

    def copy(self) -> "ElementaryTree":
        return ElementaryTree(
            self.name, self.tree_type, self.root.copy(), list(self.anchors), self.foot
        )


@dataclass
class TreeFamily:
    name: str
    trees: list[str]


@dataclass
class Grammar:
    categories: set[Category]
    trees: dict[str, ElementaryTree]
    families: dict[str, TreeFamily]
    default_start: Category

    def expand(self, names: list[str]) -> list[str]:
        """Family names become their member tree names; tree names pass through."""
        out: list[str] = []
        for name in names:
            if name in self.families:
                out.extend(self.families[name].trees)
            elif name in self.trees:
                out.append(name)
            else:
                raise KeyError(f"unknown tree or family {name!r}")
        return out


@dataclass
class AnchoredTree:
    """An elementary tree with lexemes installed and lexical equations applied."""

    base: str
    lexemes: tuple[str, ...]
    instantiated: ElementaryTree
    origin_pos: Category

    # Delegation so the unification regime can treat this as a tree.
    @property
    def root(self) -> TreeNode:
        return self.instantiated.root

    @property
    def foot(self):
        return self.instantiated.foot

    @property
    def tree_type(self) -> str:
        return self.instantiated.tree_type

    def node_at(self, address):
        return self.instantiated.node_at(address)

    def key(self):
        return (self.base, self.lexemes, self.origin_pos)


# ---------------------------------------------------------------------------
# Validation


def validate_tree(t: ElementaryTree) -> list[str]:
    """Structural well-formedness violations; empty list iff the tree is sound.

    Violations are data (each names the offending Gorn address), not errors.
    """
    violations: list[str] = []
    seen_feet: list[tuple[int, ...]] = []
    anchors_found: list[tuple[int, ...]] = []

    def visit(node: TreeNode, address: tuple[int, ...]):
        where = format_gorn(address)
        if node.address != address:
            violations.append(
                f"address mismatch at {where}: node records {format_gorn(node.address)}"
            )
        if node.kind not in KINDS:
            violations.append(f"unknown node kind {node.kind!r} at {where}")
        if node.kind in ("subst", "foot", "anchor") and node.children:
            violations.append(f"{node.kind} node with children at {where}")
        if node.kind == "interior" and not node.children:
            violations.append(f"interior node without children at {where}")
        if node.kind in ("subst", "foot") and not node.bottom.is_empty():
            violations.append(
                f"{node.kind} node carries a bottom feature structure at {where}"
            )
        if node.kind == "foot":
            seen_feet.append(address)
        if node.kind == "anchor":
            anchors_found.append(address)
        for i, child in enumerate(node.children):
            visit(child, address + (i,))

    visit(t.root, ())

    if t.root.kind in ("subst", "foot"):
        violations.append(f"root node may not be a {t.root.kind} node at {format_gorn(())}")

    if t.tree_type == "initial":
        for addr in seen_feet:
            violations.append(f"foot node in initial tree at address {format_gorn(addr)}")
    elif t.tree_type == "auxiliary":
        if not seen_feet:
            violations.append("auxiliary tree without a foot node at address 0")
        elif len(seen_feet) > 1:
            violations.append(
                "multiple foot nodes at addresses "
                + ", ".join(format_gorn(a) for a in seen_feet)
            )
        else:
            foot_node = t.node_at(seen_feet[0])
            if foot_node.category != t.root.category:
                violations.append(
                    f"foot/root category mismatch at {format_gorn(seen_feet[0])}: "
                    f"{foot_node.category} vs {t.root.category}"
                )
        if t.foot is not None and seen_feet and t.foot != seen_feet[0]:
            violations.append(
                f"recorded foot {format_gorn(t.foot)} is not the foot node at "
                f"{format_gorn(seen_feet[0])}"
            )
    else:
        violations.append(f"unknown tree type {t.tree_type!r} at address 0")

    if not anchors_found:
        violations.append("tree has no anchor node (lexicalization requires one) at address 0")
    for addr in t.anchors:
        if addr not in anchors_found:
            violations.append(f"recorded anchor at {format_gorn(addr)} is not an anchor node")

    return violations


# ---------------------------------------------------------------------------
# Anchoring


def _resolve_equation_address(t: ElementaryTree, node) -> tuple[int, ...]:
    if isinstance(node, tuple):
        return node
    if node == "root":
        return ()
    if node == "foot":
        if t.foot is None:
            raise ValueError(f"tree {t.name} has no foot node for alias 'foot'")
        return t.foot
    if node == "anchor":
        return t.anchors[0]
    if node.startswith("anchor") and node[6:].isdigit():
        idx = int(node[6:]) - 1
        if not 0 <= idx < len(t.anchors):
            raise ValueError(f"tree {t.name} has no anchor #{idx + 1}")
        return t.anchors[idx]
    raise ValueError(f"unknown equation address {node!r}")


def anchor(
    t: ElementaryTree,
    lexemes: list[str] | tuple[str, ...],
    equations: list[FeatureEquation] = (),
    pos: Category = "",
) -> AnchoredTree:
    """Install lexemes at the anchor nodes and unify lexical equations in.

    Never mutates ``t``; deterministic for equal arguments. Raises
    AnchorFailure when an equation clashes with the tree (callers drop the
    tree/lexeme pair), ValueError for malformed calls.
    """
    lexemes = tuple(lexemes)
    if len(lexemes) != len(t.anchors):
        raise ValueError(
            f"tree {t.name} has {len(t.anchors)} anchors but got {len(lexemes)} lexemes"
        )
    inst = t.copy()
    for addr, lex in zip(t.anchors, lexemes):
        inst.node_at(addr).lexeme = lex

    env: dict = {}
    for eq in equations:
        addr = _resolve_equation_address(t, eq.node)
        node = inst.node_at(addr)  # raises KeyError on dangling addresses
        side = node.top if eq.side == "top" else node.bottom
        r = unify(side, eq.as_structure(), env)
        if isinstance(r, UnifyFailure):
            raise AnchorFailure(t.name, eq, r)
        merged, env = r
        if eq.side == "top":
            node.top = merged
        else:
            node.bottom = merged

    if env:
        for node in inst.nodes():
            node.top = resolve(node.top, env)
            node.bottom = resolve(node.bottom, env)

    return AnchoredTree(t.name, lexemes, inst, pos)


# ---------------------------------------------------------------------------
# Grammar text format


def _scan_braced(text: str, start: int, line_no: int) -> tuple[str, int]:
    if start >= len(text) or text[start] != "{":
        raise GrammarSyntaxError("expected '{' after top=/bot=", line_no)
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1], i + 1
    raise GrammarSyntaxError("unbalanced braces in feature term", line_no)


def _parse_node_line(line: str, line_no: int, max_depth: int) -> TreeNode:
    parts = line.split(None, 3)
    if len(parts) < 3:
        raise GrammarSyntaxError("node line needs <gorn> <category> <kind>", line_no)
    addr_text, category, kind = parts[0], parts[1], parts[2]
    rest = parts[3] if len(parts) == 4 else ""
    try:
        address = parse_gorn(addr_text)
    except ValueError as e:
        raise GrammarSyntaxError(str(e), line_no) from None
    if kind not in KINDS:
        raise GrammarSyntaxError(f"unknown node kind {kind!r}", line_no)

    top = FeatureStructure()
    bottom = FeatureStructure()
    lexeme = None
    i = 0
    while i < len(rest):
        if rest[i] in " \t":
            i += 1
            continue
        if rest.startswith("top=", i):
            term, i = _scan_braced(rest, i + 4, line_no)
            try:
                top = parse_term(term, max_depth)
            except ValueError as e:
                raise GrammarSyntaxError(f"bad top term: {e}", line_no) from None
        elif rest.startswith("bot=", i):
            term, i = _scan_braced(rest, i + 4, line_no)
            try:
                bottom = parse_term(term, max_depth)
            except ValueError as e:
                raise GrammarSyntaxError(f"bad bottom term: {e}", line_no) from None
        elif rest.startswith("lex=", i):
            j = i + 4
            while j < len(rest) and rest[j] not in " \t":
                j += 1
            lexeme = rest[i + 4 : j]
            i = j
        else:
            raise GrammarSyntaxError(f"unexpected field at {rest[i:]!r}", line_no)

    return TreeNode(address, category, kind, top, bottom, [], lexeme)


def _assemble_tree(
    name: str, tree_type: str, nodes: list[tuple[int, TreeNode]]
) -> ElementaryTree:
    by_addr: dict[tuple[int, ...], TreeNode] = {}
    for line_no, node in nodes:
        if node.address in by_addr:
            raise GrammarSyntaxError(
                f"duplicate node address {format_gorn(node.address)} in tree {name}", line_no
            )
        by_addr[node.address] = node
    if () not in by_addr:
        raise GrammarSyntaxError(f"tree {name} has no root node (address 0)", nodes[0][0])
    for line_no, node in nodes:
        addr = node.address
        if addr and addr[:-1] not in by_addr:
            raise GrammarSyntaxError(
                f"node {format_gorn(addr)} has no parent node in tree {name}", line_no
            )
    for addr in sorted(by_addr, key=lambda a: (len(a), a)):
        if addr:
            parent = by_addr[addr[:-1]]
            if addr[-1] != len(parent.children):
                raise GrammarSyntaxError(
                    f"children of {format_gorn(addr[:-1])} in tree {name} are not "
                    f"contiguous at index {addr[-1]}",
                    nodes[0][0],
                )
            parent.children.append(by_addr[addr])
    return ElementaryTree.from_root(name, tree_type, by_addr[()])


def load_grammar(source: str, max_depth: int | None = None) -> Grammar:
    """Parse and validate grammar text into a Grammar.

    Raises GrammarSyntaxError (with line number) or GrammarValidationError
    (naming the offending tree and rule).
    """
    from .features import MAX_FEATURE_DEPTH

    depth_cap = MAX_FEATURE_DEPTH if max_depth is None else max_depth
    lines = source.splitlines()
    if not lines or lines[0].strip() != "ltag-grammar v1":
        raise GrammarSyntaxError("missing 'ltag-grammar v1' header", 1)

    trees: dict[str, ElementaryTree] = {}
    families: dict[str, TreeFamily] = {}
    declared_categories: set[str] | None = None
    declared_start: str | None = None

    current: tuple[str, str, list[tuple[int, TreeNode]]] | None = None

    def close_current():
        nonlocal current
        if current is None:
            return
        name, tree_type, nodes = current
        if not nodes:
            raise GrammarSyntaxError(f"tree {name} has no nodes", 0)
        trees[name] = _assemble_tree(name, tree_type, nodes)
        current = None

    for idx, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split(None, 1)[0]
        if head == "start":
            close_current()
            parts = line.split()
            if len(parts) != 2:
                raise GrammarSyntaxError("start directive takes one category", idx)
            declared_start = parts[1]
        elif head == "categories":
            close_current()
            declared_categories = set(line.split()[1:])
            if not declared_categories:
                raise GrammarSyntaxError("categories directive is empty", idx)
        elif head == "tree":
            close_current()
            parts = line.split()
            if len(parts) != 3 or parts[2] not in ("initial", "auxiliary"):
                raise GrammarSyntaxError(
                    "tree header must be 'tree <name> <initial|auxiliary>'", idx
                )
            if parts[1] in trees:
                raise GrammarSyntaxError(f"duplicate tree name {parts[1]!r}", idx)
            current = (parts[1], parts[2], [])
        elif head == "family":
            close_current()
            rest = line[len("family") :].strip()
            fam_name, sep, members = rest.partition(":")
            fam_name = fam_name.strip()
            if not sep or not fam_name:
                raise GrammarSyntaxError("family line must be 'family <name>: <trees>'", idx)
            member_names = members.split()
            if not member_names:
                raise GrammarSyntaxError(f"family {fam_name!r} has no members", idx)
            if fam_name in families:
                raise GrammarSyntaxError(f"duplicate family name {fam_name!r}", idx)
            families[fam_name] = TreeFamily(fam_name, member_names)
        elif current is not None:
            current[2].append((idx, _parse_node_line(line, idx, depth_cap)))
        else:
            raise GrammarSyntaxError(f"unexpected line {line!r}", idx)
    close_current()

    categories: set[str] = set()
    for tree in trees.values():
        for node in tree.nodes():
            categories.add(node.category)

    if declared_categories is not None:
        for tree in trees.values():
            for node in tree.nodes():
                if node.category not in declared_categories:
                    raise GrammarValidationError(
                        tree.name,
                        f"category {node.category!r} at {format_gorn(node.address)} "
                        "is not in the declared category set",
                    )
        categories = declared_categories

    for tree in trees.values():
        violations = validate_tree(tree)
        if violations:
            raise GrammarValidationError(tree.name, violations[0])

    for family in families.values():
        for member in family.trees:
            if member not in trees:
                raise GrammarValidationError(
                    member, f"family {family.name!r} names an unknown tree"
                )

    if declared_start is None:
        initials = [t for t in trees.values() if t.tree_type == "initial"]
        pool = initials or list(trees.values())
        if not pool:
            raise GrammarSyntaxError("grammar declares no trees and no start directive", 1)
        declared_start = pool[0].root.category
    if trees and declared_start not in categories:
        raise GrammarValidationError(
            "<grammar>", f"start category {declared_start!r} is not a grammar category"
        )

    return Grammar(categories, trees, families, declared_start)


def parse_tree_block(text: str) -> ElementaryTree:
    """Parse a single standalone tree block (same syntax as inside a grammar)."""
    g = load_grammar("ltag-grammar v1\n" + text)
    if len(g.trees) != 1:
        raise ValueError("expected exactly one tree block")
    return next(iter(g.trees.values()))


def dump_tree(tree: ElementaryTree) -> str:
    lines = [f"tree {tree.name} {tree.tree_type}"]
    for node in tree.nodes():
        fields = [format_gorn(node.address), node.category, node.kind]
        if node.lexeme is not None:
            fields.append(f"lex={node.lexeme}")
        fields.append(f"top={format_term(node.top)}")
        if node.kind in ("interior", "anchor"):
            fields.append(f"bot={format_term(node.bottom)}")
        elif not node.bottom.is_empty():
            fields.append(f"bot={format_term(node.bottom)}")
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def dump_grammar(grammar: Grammar) -> str:
    """Canonical text form; load_grammar(dump_grammar(g)) is structurally equal to g."""
    out = ["ltag-grammar v1", f"start {grammar.default_start}"]
    if grammar.categories:
        out.append("categories " + " ".join(sorted(grammar.categories)))
    out.append("")
    for name in sorted(grammar.trees):
        out.append(dump_tree(grammar.trees[name]))
    for name in sorted(grammar.families):
        fam = grammar.families[name]
        out.append(f"family {fam.name}: " + " ".join(fam.trees))
    return "\n".join(out) + "\n"


def load_grammar_file(path) -> Grammar:
    with open(path, encoding="utf-8") as f:
        return load_grammar(f.read())


def save_grammar_file(grammar: Grammar, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_grammar(grammar))

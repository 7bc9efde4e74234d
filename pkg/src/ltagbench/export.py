"""Tree export: round-tripping text, deterministic SVG, bracketed form.

Elementary trees (and scratch trees, which share their node type) serialize
to the grammar block format and reload to equality. Derived trees export as
bracketed text for the evaluator and as SVG. The SVG layout is a layered
drawing: leaves get fixed-width slots, parents center over their children,
and top/bottom feature structures render beneath the node label, so output
is a pure function of the tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .features import format_term
from .grammar import AnchoredTree, ElementaryTree, TreeNode, dump_tree
from .parser import DerivedNode

GLYPHS = {"subst": "↓", "foot": "*", "anchor": "◊"}


@dataclass
class ViewNode:
    """Rendering-neutral view of elementary, scratch, and derived trees."""

    label: str
    glyph: str = ""
    word: str | None = None
    top: str = ""
    bottom: str = ""
    children: list["ViewNode"] = field(default_factory=list)


def view_of(tree) -> ViewNode:
    if isinstance(tree, AnchoredTree):
        tree = tree.instantiated
    if isinstance(tree, ElementaryTree):
        tree = tree.root
    if isinstance(tree, TreeNode):
        return _view_tree_node(tree)
    if isinstance(tree, DerivedNode):
        return _view_derived(tree)
    raise TypeError(f"cannot render {type(tree).__name__}")


def _view_tree_node(node: TreeNode) -> ViewNode:
    glyph = GLYPHS.get(node.kind, "")
    if node.kind == "anchor" and node.lexeme is not None:
        glyph = ""  # anchored: show the word, not the diamond
    return ViewNode(
        node.category,
        glyph,
        node.lexeme,
        "" if node.top.is_empty() else format_term(node.top),
        "" if node.bottom.is_empty() else format_term(node.bottom),
        [_view_tree_node(c) for c in node.children],
    )


def _view_derived(node: DerivedNode) -> ViewNode:
    if node.is_leaf() and node.word is not None:
        return ViewNode(node.word, word=node.word)
    return ViewNode(
        node.label,
        "",
        None,
        "" if node.top.is_empty() else format_term(node.top),
        "" if node.bottom.is_empty() else format_term(node.bottom),
        [_view_derived(c) for c in node.children],
    )


# ---------------------------------------------------------------------------
# Formats


def to_text(tree) -> str:
    """Grammar block format for elementary trees; indented sketch otherwise."""
    if isinstance(tree, AnchoredTree):
        tree = tree.instantiated
    if isinstance(tree, ElementaryTree):
        return dump_tree(tree)
    lines: list[str] = []

    def walk(v: ViewNode, depth: int):
        decorations = []
        if v.top:
            decorations.append("top=" + v.top)
        if v.bottom:
            decorations.append("bot=" + v.bottom)
        word = f" {v.word}" if v.word is not None and not v.children else ""
        lines.append("  " * depth + v.label + v.glyph + word + (" " + " ".join(decorations) if decorations else ""))
        for c in v.children:
            walk(c, depth + 1)

    walk(view_of(tree), 0)
    return "\n".join(lines) + "\n"


def to_bracketed(tree) -> str:
    """Evaluator-compatible bracketing for derived trees; glyph-marked otherwise."""
    if isinstance(tree, DerivedNode):
        return tree.bracketed()

    def walk(v: ViewNode) -> str:
        head = v.label + v.glyph
        if v.word is not None:
            return f"({head} {v.word})"
        if not v.children:
            return f"({head})"
        return "(" + head + " " + " ".join(walk(c) for c in v.children) + ")"

    return walk(view_of(tree))


CHAR_W = 7.2
LINE_H = 14
LEVEL_H = 64
PAD = 12


@dataclass
class _Layout:
    x: float
    y: float
    width: float
    view: ViewNode
    children: list["_Layout"] = field(default_factory=list)


def _measure(v: ViewNode) -> float:
    texts = [v.label + v.glyph + (" " + v.word if v.word and not v.children else "")]
    if v.top:
        texts.append("t:" + v.top)
    if v.bottom:
        texts.append("b:" + v.bottom)
    own = max(len(t) for t in texts) * CHAR_W + PAD
    if not v.children:
        return own
    kids = sum(_measure(c) for c in v.children)
    return max(own, kids)


def _place(v: ViewNode, x: float, depth: int) -> _Layout:
    width = _measure(v)
    node = _Layout(0.0, depth * LEVEL_H + PAD, width, v)
    if v.children:
        cx = x
        for c in v.children:
            child = _place(c, cx, depth + 1)
            node.children.append(child)
            cx += child.width
        node.x = (node.children[0].x + node.children[-1].x) / 2
    else:
        node.x = x + width / 2
    return node


def to_svg(tree) -> str:
    """Deterministic layered SVG with feature structures under node labels."""
    view = view_of(tree)
    root = _place(view, 0.0, 0)

    def depth_of(n: _Layout) -> int:
        return 1 + max((depth_of(c) for c in n.children), default=0)

    height = depth_of(root) * LEVEL_H + 3 * LINE_H + PAD
    width = root.width

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" font-family="monospace" font-size="12">'
    ]

    def emit(n: _Layout):
        v = n.view
        label = v.label + v.glyph
        if v.word is not None and not v.children:
            label = label if v.word == v.label else f"{label} {v.word}"
        parts.append(
            f'<text x="{n.x:.1f}" y="{n.y:.1f}" text-anchor="middle">{escape(label)}</text>'
        )
        dy = LINE_H
        for prefix, term in (("t:", v.top), ("b:", v.bottom)):
            if term:
                parts.append(
                    f'<text x="{n.x:.1f}" y="{n.y + dy:.1f}" text-anchor="middle" '
                    f'fill="#555" font-size="10">{escape(prefix + term)}</text>'
                )
                dy += LINE_H - 3
        for c in n.children:
            parts.append(
                f'<line x1="{n.x:.1f}" y1="{n.y + 4:.1f}" x2="{c.x:.1f}" '
                f'y2="{c.y - LINE_H + 2:.1f}" stroke="#888"/>'
            )
            emit(c)

    emit(root)
    parts.append("</svg>")
    return "\n".join(parts)


def export_tree(tree, format: str) -> str:
    """One tree in one of the named formats: text, svg, bracketed."""
    if format == "text":
        return to_text(tree)
    if format == "svg":
        return to_svg(tree)
    if format == "bracketed":
        return to_bracketed(tree)
    raise ValueError(f"unknown export format {format!r} (use text, svg, bracketed)")

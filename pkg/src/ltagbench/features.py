"""Attribute-value feature structures and their unification.

Feature structures decorate every tree node (a top and a bottom structure per
node). Values are atoms (bare symbols), variables (``?X``), or nested
structures. Variables are scoped to one anchored-tree instance and live in a
bindings environment separate from the structures themselves, so unification
never mutates its inputs.

Concrete term syntax, used by grammar and lexicon files::

    {agr: {num: sg, pers: 3}, mode: ind, case: ?X}
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

# Structures deeper than this are rejected at load time.  Unification of
# acyclic bounded-depth structures is decidable and cheap; grammars that need
# more nesting can raise the limit explicitly.
MAX_FEATURE_DEPTH = 4


@dataclass(frozen=True)
class Var:
    """A unification variable, identified by name within one tree instance."""

    name: str

    def __repr__(self):
        return "?" + self.name


Value = Union[str, Var, "FeatureStructure"]


class FeatureStructure:
    """A finite map from attribute names to values (atom, variable, or nested FS)."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: dict[str, Value] | None = None):
        self.pairs: dict[str, Value] = dict(pairs) if pairs else {}

    def is_empty(self) -> bool:
        return not self.pairs

    def get(self, path: tuple[str, ...] | str) -> Value | None:
        """Value at an attribute path, or None if any step is missing."""
        if isinstance(path, str):
            path = (path,)
        value: Value = self
        for attr in path:
            if not isinstance(value, FeatureStructure):
                return None
            if attr not in value.pairs:
                return None
            value = value.pairs[attr]
        return value

    def depth(self) -> int:
        """Nesting depth: {} has depth 0, {a: x} depth 1, {a: {b: x}} depth 2."""
        if not self.pairs:
            return 0
        best = 1
        for v in self.pairs.values():
            if isinstance(v, FeatureStructure):
                best = max(best, 1 + v.depth())
        return best

    def items(self) -> Iterator[tuple[str, Value]]:
        return iter(sorted(self.pairs.items()))

    def __eq__(self, other):
        return isinstance(other, FeatureStructure) and self.pairs == other.pairs

    def __hash__(self):
        return hash(frozenset((k, _hashable(v)) for k, v in self.pairs.items()))

    def __repr__(self):
        return format_term(self)


def _hashable(v: Value):
    return v if not isinstance(v, FeatureStructure) else ("#fs", hash(v))


EMPTY = FeatureStructure()

# A bindings environment: variable name -> value.  Chains of variables resolve
# to a representative; the environment is kept acyclic by the occurs check.
Bindings = dict


@dataclass(frozen=True)
class UnifyFailure:
    """Why two structures have no common instance. A value, not an exception."""

    path: tuple[str, ...]
    left: object
    right: object

    @property
    def kind(self) -> str:
        if isinstance(self.left, str) and isinstance(self.right, str):
            return "atom-clash"
        if isinstance(self.left, Var) or isinstance(self.right, Var):
            return "occurs-check"
        return "atom-structure"

    def message(self) -> str:
        where = ".".join(self.path) if self.path else "(root)"
        return f"{where}: {_show(self.left)} ≠ {_show(self.right)}"

    def __repr__(self):
        return f"UnifyFailure({self.message()})"


def _show(v) -> str:
    return format_term(v) if isinstance(v, FeatureStructure) else str(v)


def walk(value: Value, env: Bindings) -> Value:
    """Resolve a chain of variable bindings to its representative."""
    seen = set()
    while isinstance(value, Var) and value.name in env:
        if value.name in seen:
            raise ValueError(f"cyclic binding chain through ?{value.name}")
        seen.add(value.name)
        value = env[value.name]
    return value


def _occurs(var: Var, value: Value, env: Bindings) -> bool:
    value = walk(value, env)
    if isinstance(value, Var):
        return value == var
    if isinstance(value, FeatureStructure):
        return any(_occurs(var, v, env) for v in value.pairs.values())
    return False


def _unify_value(x: Value, y: Value, env: Bindings, path: tuple[str, ...]):
    x = walk(x, env)
    y = walk(y, env)
    if isinstance(x, Var) and isinstance(y, Var) and x == y:
        return x
    if isinstance(x, Var):
        if _occurs(x, y, env):
            return UnifyFailure(path, x, y)
        env[x.name] = y
        return y
    if isinstance(y, Var):
        if _occurs(y, x, env):
            return UnifyFailure(path, y, x)
        env[y.name] = x
        return x
    if isinstance(x, str) and isinstance(y, str):
        return x if x == y else UnifyFailure(path, x, y)
    if isinstance(x, FeatureStructure) and isinstance(y, FeatureStructure):
        merged: dict[str, Value] = {}
        for attr in sorted(set(x.pairs) | set(y.pairs)):
            if attr in x.pairs and attr in y.pairs:
                r = _unify_value(x.pairs[attr], y.pairs[attr], env, path + (attr,))
                if isinstance(r, UnifyFailure):
                    return r
                merged[attr] = r
            elif attr in x.pairs:
                merged[attr] = x.pairs[attr]
            else:
                merged[attr] = y.pairs[attr]
        return FeatureStructure(merged)
    return UnifyFailure(path, x, y)


def unify(a: FeatureStructure, b: FeatureStructure, env: Bindings | None = None):
    """Unify two structures under an environment.

    Returns ``(result, env')`` on success or a :class:`UnifyFailure`. Inputs
    (including ``env``) are never modified.
    """
    scratch: Bindings = dict(env) if env else {}
    r = _unify_value(a, b, scratch, ())
    if isinstance(r, UnifyFailure):
        return r
    return r, scratch


def fold_unify(parts, env: Bindings):
    """Unify a sequence of structures left to right; (result, env') or failure."""
    scratch: Bindings = dict(env)
    acc: Value = EMPTY
    for p in parts:
        r = _unify_value(acc, p, scratch, ())
        if isinstance(r, UnifyFailure):
            return r
        acc = r
    return acc, scratch


def resolve(value: Value, env: Bindings) -> Value:
    """Substitute bindings all the way down; unbound variables stay symbolic."""
    value = walk(value, env)
    if isinstance(value, FeatureStructure):
        return FeatureStructure({k: resolve(v, env) for k, v in value.pairs.items()})
    return value


def rename_variables(value: Value, suffix: str, table: dict[str, Var] | None = None) -> Value:
    """Fresh copy with every variable renamed apart (``?X`` -> ``?X~suffix``)."""
    if table is None:
        table = {}
    if isinstance(value, Var):
        if value.name not in table:
            table[value.name] = Var(f"{value.name}~{suffix}")
        return table[value.name]
    if isinstance(value, FeatureStructure):
        return FeatureStructure(
            {k: rename_variables(v, suffix, table) for k, v in value.pairs.items()}
        )
    return value


def canonical(value: Value, env: Bindings):
    """Resolved form with variables renamed in traversal order.

    Two (structure, env) pairs are alphabetic variants iff their canonical
    forms are equal.
    """
    counter = iter(range(10**9))
    table: dict[str, str] = {}

    def rec(v: Value):
        v = walk(v, env)
        if isinstance(v, Var):
            if v.name not in table:
                table[v.name] = f"v{next(counter)}"
            return ("var", table[v.name])
        if isinstance(v, FeatureStructure):
            return ("fs", tuple((k, rec(val)) for k, val in sorted(v.pairs.items())))
        return ("atom", v)

    return rec(value)


def variants_equal(a: Value, env_a: Bindings, b: Value, env_b: Bindings) -> bool:
    return canonical(a, env_a) == canonical(b, env_b)


# ---------------------------------------------------------------------------
# Concrete term syntax


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_ATOM_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_+-'~")


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, msg: str) -> TermSyntaxError:
        return TermSyntaxError(msg, self.i)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i] in " \t\r\n":
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.i += 1

    def atom(self) -> str:
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in _ATOM_CHARS:
            self.i += 1
        if self.i == start:
            raise self.error("expected a symbol")
        return self.text[start : self.i]

    def value(self) -> Value:
        self.skip_ws()
        c = self.peek()
        if c == "{":
            return self.structure()
        if c == "?":
            self.i += 1
            return Var(self.atom())
        return self.atom()

    def structure(self) -> FeatureStructure:
        self.expect("{")
        pairs: dict[str, Value] = {}
        self.skip_ws()
        if self.peek() == "}":
            self.i += 1
            return FeatureStructure()
        while True:
            self.skip_ws()
            attr = self.atom()
            if attr in pairs:
                raise self.error(f"duplicate attribute {attr!r}")
            self.skip_ws()
            self.expect(":")
            pairs[attr] = self.value()
            self.skip_ws()
            if self.peek() == ",":
                self.i += 1
                continue
            self.expect("}")
            return FeatureStructure(pairs)


def parse_term(text: str, max_depth: int = MAX_FEATURE_DEPTH) -> FeatureStructure:
    """Parse ``{attr: val, ...}`` into a FeatureStructure, enforcing the depth cap."""
    p = _TermParser(text)
    p.skip_ws()
    result = p.structure()
    p.skip_ws()
    if p.i != len(text):
        raise p.error("trailing input after feature term")
    if result.depth() > max_depth:
        raise TermSyntaxError(
            f"feature structure exceeds depth limit {max_depth}", 0
        )
    return result


def format_term(value: Value, env: Bindings | None = None) -> str:
    """Canonical text form (attributes sorted); inverse of parse_term."""
    if env is not None:
        value = resolve(value, env)
    if isinstance(value, Var):
        return "?" + value.name
    if isinstance(value, str):
        return value
    inner = ", ".join(f"{k}: {format_term(v)}" for k, v in value.items())
    return "{" + inner + "}"


def fs(source: str | dict) -> FeatureStructure:
    """Convenience constructor: from term text or a nested plain dict."""
    if isinstance(source, str):
        return parse_term(source)

    def conv(v):
        if isinstance(v, dict):
            return FeatureStructure({k: conv(x) for k, x in v.items()})
        if isinstance(v, str) and v.startswith("?"):
            return Var(v[1:])
        return v

    return conv(source)


# ---------------------------------------------------------------------------
# Feature equations (lexical idiosyncrasies installed at anchoring time)


@dataclass(frozen=True)
class FeatureEquation:
    """Install ``value`` at ``path`` in the named side of the node at ``node``.

    ``node`` is a concrete Gorn address (tuple of child indices) or one of the
    symbolic aliases ``root``, ``anchor``/``anchorN`` (N 1-based), ``foot``,
    resolved against the tree being anchored.
    """

    node: tuple[int, ...] | str
    side: str  # "top" | "bot"
    path: tuple[str, ...]
    value: Value

    def __post_init__(self):
        if self.side not in ("top", "bot"):
            raise ValueError(f"equation side must be top or bot, got {self.side!r}")
        if not self.path:
            raise ValueError("equation path must be non-empty")

    def as_structure(self) -> FeatureStructure:
        """The equation as a nested one-path structure ready for unification."""
        v: Value = self.value
        for attr in reversed(self.path):
            v = FeatureStructure({attr: v})
        return v

    def __str__(self):
        addr = self.node if isinstance(self.node, str) else format_gorn(self.node)
        return f"{addr}.{self.side}.{'.'.join(self.path)}={format_term(self.value)}"


def format_gorn(address: tuple[int, ...]) -> str:
    """Surface form of a Gorn address: root is "0", node (1,0) is "0.1.0"."""
    return ".".join(["0"] + [str(i) for i in address])


def parse_gorn(text: str) -> tuple[int, ...]:
    parts = text.split(".")
    if parts[0] != "0":
        raise ValueError(f"Gorn address must start with the root segment 0: {text!r}")
    try:
        return tuple(int(p) for p in parts[1:])
    except ValueError:
        raise ValueError(f"malformed Gorn address {text!r}") from None


_ALIASES = ("root", "anchor", "foot")


def parse_equation(text: str) -> FeatureEquation:
    """Parse ``<addr>.<top|bot>.<attr...>=<value>`` (addr concrete or alias)."""
    lhs, sep, rhs = text.partition("=")
    if not sep:
        raise ValueError(f"equation needs '=': {text!r}")
    segs = lhs.strip().split(".")
    sides = [i for i, s in enumerate(segs) if s in ("top", "bot", "bottom")]
    if not sides:
        raise ValueError(f"equation needs a .top or .bot segment: {text!r}")
    cut = sides[0]
    addr_text, side, path = ".".join(segs[:cut]), segs[cut], tuple(segs[cut + 1 :])
    side = "bot" if side in ("bot", "bottom") else "top"
    node: tuple[int, ...] | str
    if addr_text in _ALIASES or (addr_text.startswith("anchor") and addr_text[6:].isdigit()):
        node = addr_text
    else:
        node = parse_gorn(addr_text)
    p = _TermParser(rhs.strip())
    value = p.value()
    p.skip_ws()
    if p.i != len(p.text):
        raise p.error("trailing input after equation value")
    return FeatureEquation(node, side, path, value)


def parse_equations(text: str) -> list[FeatureEquation]:
    """Comma-separated equation list; commas inside {...} values are respected."""
    out = []
    depth = 0
    start = 0
    text = text.strip()
    if not text:
        return out
    for i, c in enumerate(text):
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        elif c == "," and depth == 0:
            out.append(parse_equation(text[start:i]))
            start = i + 1
    out.append(parse_equation(text[start:]))
    return out


# ---------------------------------------------------------------------------
# The FB-LTAG unification regime at combination sites


def substitution_unify(site, incoming_root, env: Bindings):
    """Unify a substitution site's top with the incoming initial root's top.

    Returns an extended environment or a UnifyFailure. Category mismatch is a
    caller bug (the parser never attempts it), hence an exception.
    """
    if site.category != incoming_root.category:
        raise ValueError(
            f"substitution category mismatch: {site.category} vs {incoming_root.category}"
        )
    r = unify(site.top, incoming_root.top, env)
    if isinstance(r, UnifyFailure):
        return r
    return r[1]


def adjunction_unify(site, aux, env: Bindings):
    """Unify site top with aux root top and site bottom with aux foot bottom."""
    root = aux.root
    foot_node = aux.node_at(aux.foot)
    if site.kind == "subst":
        raise ValueError("adjunction at a substitution node is not defined")
    if site.category != root.category:
        raise ValueError(
            f"adjunction category mismatch: {site.category} vs {root.category}"
        )
    r = unify(site.top, root.top, env)
    if isinstance(r, UnifyFailure):
        return r
    r = unify(site.bottom, foot_node.bottom, r[1])
    if isinstance(r, UnifyFailure):
        return r
    return r[1]


@dataclass(frozen=True)
class FinalizeFailure:
    address: tuple[int, ...]
    failure: UnifyFailure

    def message(self) -> str:
        return f"node {format_gorn(self.address)}: {self.failure.message()}"


def finalize(root, env: Bindings):
    """End-of-derivation collapse: unify top with bottom at every node.

    Walks the derived tree in address order and returns the extended
    environment, or a FinalizeFailure naming the first offending node.
    """
    out = dict(env)

    def rec(node, address):
        nonlocal out
        r = unify(node.top, node.bottom, out)
        if isinstance(r, UnifyFailure):
            return FinalizeFailure(address, r)
        out = r[1]
        for i, child in enumerate(getattr(node, "children", ()) or ()):
            bad = rec(child, address + (i,))
            if bad is not None:
                return bad
        return None

    bad = rec(root, ())
    return out if bad is None else bad

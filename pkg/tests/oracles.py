"""Independent reference implementations used only to check the real ones.

Nothing here may reuse the code paths it checks: the naive unifier re-derives
unification with Robinson-style explicit substitutions, the derivation
enumerator tries every tree assignment and every attachment map, and the
tagging oracle scores every tag sequence exhaustively.
"""

import itertools

from ltagbench.features import (
    FeatureStructure,
    UnifyFailure,
    Var,
    fold_unify,
    rename_variables,
)


# ---------------------------------------------------------------------------
# Naive term unifier (explicit substitution composition, plain tuples)


def _to_term(v):
    if isinstance(v, FeatureStructure):
        return ("fs", tuple((k, _to_term(x)) for k, x in sorted(v.pairs.items())))
    if isinstance(v, Var):
        return ("var", v.name)
    return ("atom", v)


def _from_term(t):
    tag = t[0]
    if tag == "fs":
        return FeatureStructure({k: _from_term(x) for k, x in t[1]})
    if tag == "var":
        return Var(t[1])
    return t[1]


def _substitute(t, sub):
    if t[0] == "var":
        while t[0] == "var" and t[1] in sub:
            t = sub[t[1]]
        if t[0] == "fs":
            return _substitute(t, sub)
        return t
    if t[0] == "fs":
        return ("fs", tuple((k, _substitute(x, sub)) for k, x in t[1]))
    return t


def _contains_var(t, name):
    if t[0] == "var":
        return t[1] == name
    if t[0] == "fs":
        return any(_contains_var(x, name) for _, x in t[1])
    return False


def _naive(x, y, sub):
    x = _substitute(x, sub)
    y = _substitute(y, sub)
    if x == y:
        return x, sub
    if x[0] == "var":
        if _contains_var(y, x[1]):
            return None
        return y, {**sub, x[1]: y}
    if y[0] == "var":
        if _contains_var(x, y[1]):
            return None
        return x, {**sub, y[1]: x}
    if x[0] == "atom" or y[0] == "atom":
        return None
    keys_x = dict(x[1])
    keys_y = dict(y[1])
    merged = []
    for k in sorted(set(keys_x) | set(keys_y)):
        if k in keys_x and k in keys_y:
            r = _naive(keys_x[k], keys_y[k], sub)
            if r is None:
                return None
            value, sub = r
            merged.append((k, value))
        else:
            merged.append((k, keys_x.get(k, keys_y.get(k))))
    return ("fs", tuple(merged)), sub


def naive_unify(a: FeatureStructure, b: FeatureStructure):
    """Most general unifier of two structures, or None. Fully resolved output."""
    r = _naive(_to_term(a), _to_term(b), {})
    if r is None:
        return None
    term, sub = r
    return _from_term(_substitute(term, sub))


# ---------------------------------------------------------------------------
# Brute-force TAG derivation enumerator
#
# Tries every per-word tree assignment and every substitution/adjunction
# attachment map, splices derived trees with its own code, checks the fringe
# against the input, and checks satisfiability of all feature constraints.
# Single-anchor candidates only (all randomized instances use single anchors).
# Selection is positional: the tree assigned to word i must lexicalize word i,
# so the fringe records (assigned word index, lexeme) pairs and both must line
# up with the input. Without this, repeated tokens with asymmetric candidate
# sets would let anchors cross positions.


class ONode:
    __slots__ = ("label", "kind", "tops", "bottoms", "children", "word")

    def __init__(self, label, kind, tops, bottoms, children, word=None):
        self.label = label
        self.kind = kind
        self.tops = tops
        self.bottoms = bottoms
        self.children = children
        self.word = word


def _splice(use_idx, children_map, uses, counter):
    """Derived tree for one attachment map; returns (root, effective foot)."""
    counter[0] += 1
    suffix = f"o{counter[0]}"
    table = {}
    tree = uses[use_idx].instantiated
    addr_map = {}

    def build(node):
        out = ONode(
            node.category,
            node.kind,
            [rename_variables(node.top, suffix, table)],
            [rename_variables(node.bottom, suffix, table)],
            [build(c) for c in node.children],
            (use_idx, node.lexeme) if node.kind == "anchor" else None,
        )
        addr_map[node.address] = out
        return out

    root = build(tree.root)
    foot = addr_map.get(tree.foot) if tree.foot is not None else None

    for addr, op, child_idx in sorted(children_map.get(use_idx, [])):
        site = addr_map[addr]
        c_root, c_foot = _splice(child_idx, children_map, uses, counter)
        if op == "subst":
            site.tops = site.tops + c_root.tops
            site.bottoms = site.bottoms + c_root.bottoms
            site.children = c_root.children
            site.word = c_root.word
            site.kind = "filled"
        else:
            moved = (site.bottoms, site.children, site.word)
            site.tops = site.tops + c_root.tops
            site.bottoms = c_root.bottoms
            site.children = c_root.children
            site.word = c_root.word
            c_foot.bottoms = c_foot.bottoms + moved[0]
            c_foot.children = moved[1]
            c_foot.word = moved[2]
            if site is foot:
                foot = c_foot
    return root, foot


def _fringe(node, out):
    if node.word is not None and not node.children:
        out.append(node.word)
    for c in node.children:
        _fringe(c, out)


def _has_open_subst(node):
    if node.kind == "subst":
        return True
    return any(_has_open_subst(c) for c in node.children)


def _features_satisfiable(root):
    env = {}

    def rec(node):
        nonlocal env
        r = fold_unify(node.tops + node.bottoms, env)
        if isinstance(r, UnifyFailure):
            return False
        env = r[1]
        return all(rec(c) for c in node.children)

    return rec(root)


def oracle_derivations(tokens, candidates, start):
    """Set of derivation keys for the sentence, enumerated exhaustively."""
    from ltagbench.parser import Derivation

    n = len(tokens)
    if n == 0:
        return set()
    keys = set()
    for combo in itertools.product(*candidates):
        uses = list(combo)
        for root_idx in range(n):
            root_use = uses[root_idx]
            if root_use.tree_type != "initial" or root_use.root.category != start:
                continue
            others = [i for i in range(n) if i != root_idx]
            option_lists = []
            for i in others:
                u = uses[i]
                opts = []
                for host in range(n):
                    if host == i:
                        continue
                    for node in uses[host].instantiated.nodes():
                        if (
                            u.tree_type == "initial"
                            and node.kind == "subst"
                            and node.category == u.root.category
                        ):
                            opts.append((host, node.address, "subst"))
                        elif (
                            u.tree_type == "auxiliary"
                            and node.kind != "subst"
                            and node.category == u.root.category
                        ):
                            opts.append((host, node.address, "adjoin"))
                option_lists.append(opts)

            for assignment in itertools.product(*option_lists):
                parent = dict(zip(others, assignment))
                if not _is_tree(parent, others, root_idx):
                    continue
                if not _slots_ok(parent, others, uses, root_idx):
                    continue
                children_map = {}
                for i in others:
                    host, addr, op = parent[i]
                    children_map.setdefault(host, []).append((addr, op, i))
                derived, _ = _splice(root_idx, children_map, uses, [0])
                fringe = []
                _fringe(derived, fringe)
                if fringe != [(i, w) for i, w in enumerate(tokens)]:
                    continue
                if _has_open_subst(derived):
                    continue
                if not _features_satisfiable(derived):
                    continue
                keys.add(_deriv_key(root_idx, children_map, uses, Derivation))
    return keys


def _is_tree(parent, others, root_idx):
    for i in others:
        seen = {i}
        cur = i
        while cur != root_idx:
            cur = parent[cur][0]
            if cur in seen:
                return False
            seen.add(cur)
    return True


def _slots_ok(parent, others, uses, root_idx):
    filled = {}
    adjoined = set()
    for i in others:
        host, addr, op = parent[i]
        if op == "subst":
            slot = (host, addr)
            if slot in filled:
                return False
            filled[slot] = i
        else:
            if (host, addr) in adjoined:
                return False
            adjoined.add((host, addr))
    # every substitution slot of every participating use must be filled
    for i in [root_idx] + others:
        for node in uses[i].instantiated.nodes():
            if node.kind == "subst" and (i, node.address) not in filled:
                return False
    return True


def _deriv_key(i, children_map, uses, Derivation):
    def deriv_of(idx):
        ops = []
        for addr, op, child in sorted(children_map.get(idx, [])):
            ops.append((addr, op, deriv_of(child)))
        u = uses[idx]
        return Derivation(
            u.base,
            u.lexemes,
            u.origin_pos,
            tuple(sorted(ops, key=lambda o: (o[0], o[1], o[2].key()))),
            anchored=u,
        )

    return deriv_of(i).key()


# ---------------------------------------------------------------------------
# Exhaustive tag-sequence scorer (oracle for viterbi / n_best)


def brute_force_sequences(words, model, lexprobs):
    """Every tag sequence with its exact score, sorted by (-score, tags)."""
    scored = []
    for tags in itertools.product(sorted(model.tagset), repeat=len(words)):
        score = model.score_sequence(words, list(tags), lexprobs)
        scored.append((score, tuple(tags)))
    scored.sort(key=lambda st: (-st[0], st[1]))
    return scored

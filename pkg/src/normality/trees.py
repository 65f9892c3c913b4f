"""Planar rooted trees, metric trees, and the surgery operations on them.

A tree is a nested ordered structure: a node is either a leaf or carries an
ordered tuple of at least two children (no degree-2 vertices).  The root edge
hangs below the outermost node and is implicit.  Internal edges (edges joining
two internal nodes) are addressed by the child-index path of their upper node,
e.g. (0, 1) is the edge above the second child of the first child.

Metric trees attach an exact length in [0, oo] to every internal edge.  The
only floating point value allowed anywhere is math.inf, the compactification
point; finite lengths are `fractions.Fraction`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence, Union

INFINITY = math.inf

Length = Union[Fraction, float]
EdgeId = tuple[int, ...]


class TreeSyntaxError(ValueError):
    """Parse failure, carrying the byte offset of the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def as_length(value) -> Length:
    """Coerce a value to an exact edge length; "inf" and math.inf mean infinity."""
    if value == INFINITY:
        return INFINITY
    if isinstance(value, str):
        if value.strip() == "inf":
            return INFINITY
        value = Fraction(value)
    if isinstance(value, float):
        raise ValueError(f"finite float length {value!r} rejected; use Fraction")
    length = Fraction(value)
    if length < 0:
        raise ValueError(f"negative edge length {length}")
    return length


def length_str(length: Length) -> str:
    return "inf" if length == INFINITY else str(Fraction(length))


@dataclass(frozen=True)
class Tree:
    """Planar rooted tree; children ordered left to right, arity 0 or >= 2."""

    children: tuple["Tree", ...] = ()

    def __post_init__(self):
        if len(self.children) == 1:
            raise ValueError("internal node of arity 1 (degree-2 vertex) rejected")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self) -> str:
        return f"Tree({serialize(self)!r})"


LEAF = Tree()


def corolla(n: int) -> Tree:
    """The n-leaf tree with a single internal node."""
    if n < 2:
        raise ValueError("corolla needs at least 2 leaves")
    return Tree((LEAF,) * n)


def leaves(t: Tree) -> int:
    if t.is_leaf:
        return 1
    return sum(leaves(c) for c in t.children)


def internal_nodes(t: Tree) -> int:
    if t.is_leaf:
        return 0
    return 1 + sum(internal_nodes(c) for c in t.children)


def internal_edges(t: Tree) -> list[EdgeId]:
    """Edge identifiers in lexicographic (= depth-first) order."""
    out: list[EdgeId] = []

    def walk(node: Tree, path: EdgeId) -> None:
        for i, child in enumerate(node.children):
            if not child.is_leaf:
                out.append(path + (i,))
                walk(child, path + (i,))

    if not t.is_leaf:
        walk(t, ())
    return out


def edge_str(edge: EdgeId) -> str:
    return ".".join(str(i) for i in edge)


def edge_from_str(text: str) -> EdgeId:
    if text == "":
        raise ValueError("empty edge identifier")
    return tuple(int(part) for part in text.split("."))


def parse(text: str) -> Tree:
    """Parse the grammar  T ::= "*" | "(" T T T* ")"  (whitespace ignored)."""
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise TreeSyntaxError("unexpected end of input", pos)
        ch = text[pos]
        if ch == "*":
            pos += 1
            return LEAF
        if ch == "(":
            start = pos
            pos += 1
            kids = []
            while True:
                skip_ws()
                if pos >= len(text):
                    raise TreeSyntaxError("unclosed '('", start)
                if text[pos] == ")":
                    break
                kids.append(node())
            if len(kids) < 2:
                raise TreeSyntaxError("node must have at least 2 children", start)
            pos += 1
            return Tree(tuple(kids))
        raise TreeSyntaxError(f"unexpected character {ch!r}", pos)

    t = node()
    skip_ws()
    if pos != len(text):
        raise TreeSyntaxError("trailing input after tree", pos)
    return t


def serialize(t: Tree) -> str:
    if t.is_leaf:
        return "*"
    return "(" + "".join(serialize(c) for c in t.children) + ")"


def leaf_path(t: Tree, k: int) -> EdgeId:
    """Path of the k-th leaf (1-based, left to right)."""
    if not 1 <= k <= leaves(t):
        raise ValueError(f"leaf index {k} out of range 1..{leaves(t)}")

    def walk(node: Tree, k: int, path: EdgeId) -> EdgeId:
        if node.is_leaf:
            return path
        for i, child in enumerate(node.children):
            n = leaves(child)
            if k <= n:
                return walk(child, k, path + (i,))
            k -= n
        raise AssertionError("unreachable")

    return walk(t, k, ())


def graft(rho: Tree, k: int, sigma: Tree) -> Tree:
    """Attach sigma's root edge to the k-th leaf edge of rho.

    Grafting a 1-leaf tree (in either position) creates no new node: with a
    leaf sigma the result is rho, and grafting onto the 1-leaf tree returns
    sigma.  In all other cases the edge above sigma's outermost node becomes
    a new internal edge, so |I| grows by |I(rho)| + |I(sigma)| + 1.
    """
    if not 1 <= k <= leaves(rho):
        raise ValueError(f"leaf index {k} out of range 1..{leaves(rho)}")
    if sigma.is_leaf:
        return rho

    def walk(node: Tree, k: int) -> Tree:
        if node.is_leaf:
            return sigma
        kids = []
        acc = 0
        for child in node.children:
            n = leaves(child)
            if acc < k <= acc + n:
                kids.append(walk(child, k - acc))
            else:
                kids.append(child)
            acc += n
        return Tree(tuple(kids))

    return walk(rho, k)


def collapse_edge(t: Tree, edge: EdgeId) -> tuple[Tree, dict[EdgeId, EdgeId]]:
    """Contract one internal edge; return the new tree and the identifier map.

    The map sends every surviving internal edge of t to its identifier in the
    result and preserves lexicographic order (the contracted edge is absent).
    """
    if edge not in set(internal_edges(t)):
        raise ValueError(f"{edge} is not an internal edge")
    parent_path, idx = edge[:-1], edge[-1]

    def walk(node: Tree, path: EdgeId) -> Tree:
        if path == parent_path:
            victim = node.children[idx]
            kids = node.children[:idx] + victim.children + node.children[idx + 1:]
            return Tree(kids)
        step = edge[len(path)]
        kids = list(node.children)
        kids[step] = walk(kids[step], path + (step,))
        return Tree(tuple(kids))

    new_tree = walk(t, ())
    arity = len(t_subtree_at(t, edge).children)
    id_map: dict[EdgeId, EdgeId] = {}
    for e in internal_edges(t):
        if e == edge:
            continue
        if e[:len(edge)] == edge:
            # descendant of the contracted node: splice into the parent
            id_map[e] = parent_path + (idx + e[len(edge)],) + e[len(edge) + 1:]
        elif e[:len(parent_path)] == parent_path and len(e) > len(parent_path) \
                and e[len(parent_path)] > idx:
            # later sibling subtree: indices shift by arity - 1
            shifted = e[len(parent_path)] + arity - 1
            id_map[e] = parent_path + (shifted,) + e[len(parent_path) + 1:]
        else:
            id_map[e] = e
    return new_tree, id_map


def t_subtree_at(t: Tree, path: EdgeId) -> Tree:
    node = t
    for i in path:
        node = node.children[i]
    return node


# ---------------------------------------------------------------------------
# metric trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class MetricTree:
    """A tree together with one exact length per internal edge."""

    tree: Tree
    lengths: dict[EdgeId, Length]

    def __post_init__(self):
        expected = set(internal_edges(self.tree))
        got = set(self.lengths)
        if got != expected:
            missing = expected - got
            extra = got - expected
            raise ValueError(
                f"length table mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        for e, v in self.lengths.items():
            if v != INFINITY and not isinstance(v, Fraction):
                raise ValueError(f"edge {e}: length must be Fraction or INFINITY")
            if v != INFINITY and v < 0:
                raise ValueError(f"edge {e}: negative length")

    def is_canonical(self) -> bool:
        return all(v != 0 for v in self.lengths.values())


def metric(tree: Tree, lengths: Optional[Mapping[EdgeId, object]] = None,
           fill: object = INFINITY) -> MetricTree:
    """Build a MetricTree, coercing length values; absent edges get `fill`."""
    table = {}
    given = dict(lengths or {})
    for e in internal_edges(tree):
        table[e] = as_length(given.pop(e)) if e in given else as_length(fill)
    if given:
        raise ValueError(f"lengths given for non-edges: {sorted(given)}")
    return MetricTree(tree, table)


# Internal annotated form: a leaf is None, an internal node is a list of
# (child_ann, plen) pairs where plen is the length of the edge down to that
# child (None exactly when the child is a leaf).

def _to_ann(t: Tree, lengths: Mapping[EdgeId, Length], path: EdgeId = ()):
    if t.is_leaf:
        return None
    return [
        (_to_ann(c, lengths, path + (i,)),
         None if c.is_leaf else lengths[path + (i,)])
        for i, c in enumerate(t.children)
    ]


def _from_ann(ann) -> MetricTree:
    lengths: dict[EdgeId, Length] = {}

    def build(a, path: EdgeId) -> Tree:
        if a is None:
            return LEAF
        kids = []
        for i, (child, plen) in enumerate(a):
            kids.append(build(child, path + (i,)))
            if child is not None:
                lengths[path + (i,)] = plen
        return Tree(tuple(kids))

    return MetricTree(build(ann, ()), lengths)


def _ann_leaves(a) -> int:
    if a is None:
        return 1
    return sum(_ann_leaves(c) for c, _ in a)


def graft_metric(rho: MetricTree, k: int, sigma: MetricTree, L) -> MetricTree:
    """Grafting with a length on the new internal edge; L = INFINITY gives
    the plain grafting, L = 0 canonicalizes to the edge collapse."""
    L = as_length(L)
    new_tree = graft(rho.tree, k, sigma.tree)
    if sigma.tree.is_leaf:
        return rho
    if rho.tree.is_leaf:
        return sigma
    pk = leaf_path(rho.tree, k)
    lengths: dict[EdgeId, Length] = dict(rho.lengths)
    for e, v in sigma.lengths.items():
        lengths[pk + e] = v
    lengths[pk] = L
    return MetricTree(new_tree, lengths)


def degeneracy_metric(mt: MetricTree, k: int) -> MetricTree:
    """Remove the k-th leaf edge; a resulting degree-2 vertex is merged and
    the two identified internal lengths combine by max."""
    n = leaves(mt.tree)
    if n < 3:
        raise ValueError(f"degeneracy needs at least 3 leaves, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"leaf index {k} out of range 1..{n}")

    def remove(a, k):
        # returns ("keep", new_ann) or ("merge", child_ann, child_plen)
        acc = 0
        for idx, (child, plen) in enumerate(a):
            nl = _ann_leaves(child)
            if acc < k <= acc + nl:
                if child is None:
                    rest = a[:idx] + a[idx + 1:]
                    if len(rest) == 1:
                        only, olen = rest[0]
                        return ("merge", only, olen)
                    return ("keep", rest)
                result = remove(child, k - acc)
                if result[0] == "keep":
                    entry = (result[1], plen)
                else:
                    _, grand, glen = result
                    merged = None if grand is None else max(plen, glen)
                    entry = (grand, merged)
                return ("keep", a[:idx] + [entry] + a[idx + 1:])
            acc += nl
        raise AssertionError("unreachable")

    result = remove(_to_ann(mt.tree, mt.lengths), k)
    if result[0] == "keep":
        return _from_ann(result[1])
    # the outermost node merged into the root edge; its length is dropped
    _, child, _ = result
    return _from_ann(child)


def degeneracy(t: Tree, k: int) -> Tree:
    return degeneracy_metric(metric(t), k).tree


def canonicalize(mt: MetricTree) -> MetricTree:
    """Collapse every zero-length internal edge.  Idempotent; the result does
    not depend on the collapse order."""

    def canon(a):
        if a is None:
            return None
        out = []
        for child, plen in a:
            c = canon(child)
            if c is not None and plen == 0:
                out.extend(c)
            else:
                out.append((c, plen))
        return out

    return _from_ann(canon(_to_ann(mt.tree, mt.lengths)))


def collapse_metric_edge(mt: MetricTree, edge: EdgeId) -> MetricTree:
    """Collapse a single internal edge, discarding its length."""
    new_tree, id_map = collapse_edge(mt.tree, edge)
    return MetricTree(new_tree,
                      {id_map[e]: v for e, v in mt.lengths.items() if e != edge})


def spine(obj) -> list[EdgeId]:
    """Internal edges on the path from the last leaf to the root, root first."""
    t = obj.tree if isinstance(obj, MetricTree) else obj
    out: list[EdgeId] = []
    path: EdgeId = ()
    node = t
    while not node.is_leaf:
        idx = len(node.children) - 1
        child = node.children[idx]
        if child.is_leaf:
            break
        path = path + (idx,)
        out.append(path)
        node = child
    return out


def cut(mt: MetricTree, L) -> tuple[list[MetricTree], list[Length]]:
    """Cut at the spine edges of length >= L.

    Returns (pieces, cut_lengths) with pieces ordered root first; each cut
    point becomes the last leaf of the lower piece and the root of the upper
    piece.  len(cut_lengths) == len(pieces) - 1 records the severed lengths,
    so grafting the pieces back onto last leaves with these lengths restores
    the input.  The input must be canonical.
    """
    L = as_length(L)
    if not mt.is_canonical():
        raise ValueError("cut requires a canonical metric tree (no zero lengths)")

    pieces: list[MetricTree] = []
    cut_lengths: list[Length] = []
    cur = _to_ann(mt.tree, mt.lengths)
    while True:
        # topmost qualifying edge on the rightmost path of `cur`
        depth = 0
        node = cur
        found = None
        while node is not None:
            child, plen = node[-1]
            if child is not None and plen >= L:
                found = (depth, child, plen)
                break
            depth += 1
            node = child
        if found is None:
            pieces.append(_from_ann(cur))
            break
        d, upper, plen = found

        def replace(a, remaining):
            if remaining == 0:
                return a[:-1] + [(None, None)]
            child, clen = a[-1]
            return a[:-1] + [(replace(child, remaining - 1), clen)]

        pieces.append(_from_ann(replace(cur, d)))
        cut_lengths.append(plen)
        cur = upper
    return pieces, cut_lengths


def reassemble(pieces: Sequence[MetricTree], cut_lengths: Sequence[Length]) -> MetricTree:
    """Right fold inverse of `cut`: graft each upper piece onto the last leaf."""
    if len(pieces) != len(cut_lengths) + 1:
        raise ValueError("need exactly one more piece than cut length")
    acc = pieces[-1]
    for piece, ln in zip(reversed(pieces[:-1]), reversed(list(cut_lengths))):
        acc = graft_metric(piece, leaves(piece.tree), acc, ln)
    return acc


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

MAX_ENUM_LEAVES = 12


@functools.lru_cache(maxsize=None)
def _enumerate(n: int, binary_only: bool) -> tuple[Tree, ...]:
    if n == 1:
        return (LEAF,)
    result: list[Tree] = []
    arities = (2,) if binary_only else range(2, n + 1)
    for arity in arities:
        for split in _compositions(n, arity):
            for kids in _child_products(split, binary_only):
                result.append(Tree(kids))
    result.sort(key=lambda t: (len(internal_edges(t)), serialize(t)))
    return tuple(result)


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _child_products(split: Sequence[int], binary_only: bool) -> Iterator[tuple[Tree, ...]]:
    if not split:
        yield ()
        return
    for head in _enumerate(split[0], binary_only):
        for tail in _child_products(split[1:], binary_only):
            yield (head,) + tail


def enumerate_trees(n: int, binary_only: bool = False) -> list[Tree]:
    """All planar rooted trees with n leaves, ordered by edge count then by
    serialization.  Guarded to n <= 12; counts grow super-exponentially."""
    if not 1 <= n <= MAX_ENUM_LEAVES:
        raise ValueError(f"leaf count {n} outside supported range 1..{MAX_ENUM_LEAVES}")
    return list(_enumerate(n, binary_only))


# ---------------------------------------------------------------------------
# JSON length tables
# ---------------------------------------------------------------------------

def lengths_to_json(mt: MetricTree) -> list[dict[str, str]]:
    return [{"edge": edge_str(e), "len": length_str(mt.lengths[e])}
            for e in internal_edges(mt.tree)]


def lengths_from_json(tree: Tree, data: Sequence[Mapping[str, str]]) -> MetricTree:
    table = {}
    for item in data:
        edge = edge_from_str(item["edge"])
        if edge in table:
            raise ValueError(f"duplicate edge {item['edge']} in length table")
        table[edge] = as_length(item["len"])
    return metric(tree, table)

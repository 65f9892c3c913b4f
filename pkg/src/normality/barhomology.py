"""Truncated two-sided bar constructions of finite monoids at desk scale.

B_k(X, G, Y) is modeled by its normalized cellular chain complex: the degree-i
basis consists of tuples (x, g_1, ..., g_i, y) with every middle coordinate
different from the identity, and the boundary is the alternating face sum
(absorb into x, multiply adjacent entries, absorb into y) where faces hitting
an identity coordinate vanish.  For X = Y = point and i < k this computes the
homology of the k-th projective space of G; degree k reports the cycles, i.e.
the homology of the skeleton stage itself.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exactlin import HomologyGroup, IntMatrix, chain_homology

MAX_TRUNCATION = 8
MAX_MONOID_SIZE = 24


class MonoidLawError(ValueError):
    """The supplied table fails the identity or associativity laws."""


class FiniteMonoid:
    """A finite monoid given by labels and a full multiplication table.

    table[a][b] is the index of the product of elements a and b.  Identity
    and associativity are checked at construction; is_group records whether
    every element has a two-sided inverse.
    """

    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[int]],
                 name: str = "monoid"):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("duplicate element labels")
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square of matching size")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValueError("table entry out of range")
        self.name = name
        self.identity = self._find_identity()
        self._check_associative()
        self.is_group = self._has_inverses()

    def _find_identity(self) -> int:
        for e in range(len(self.labels)):
            if all(self.table[e][a] == a == self.table[a][e]
                   for a in range(len(self.labels))):
                return e
        raise MonoidLawError("no two-sided identity element")

    def _check_associative(self) -> None:
        n = len(self.labels)
        t = self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise MonoidLawError(
                            f"non-associative triple ({self.labels[a]}, "
                            f"{self.labels[b]}, {self.labels[c]})")

    def _has_inverses(self) -> bool:
        n = len(self.labels)
        e = self.identity
        return all(any(self.table[a][b] == e and self.table[b][a] == e
                       for b in range(n)) for a in range(n))

    def __len__(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @classmethod
    def cyclic(cls, q: int) -> "FiniteMonoid":
        if q < 1:
            raise ValueError("cyclic group order must be positive")
        labels = [str(i) for i in range(q)]
        table = [[(a + b) % q for b in range(q)] for a in range(q)]
        return cls(labels, table, name=f"cyclic:{q}")

    @classmethod
    def from_json(cls, obj) -> "FiniteMonoid":
        """Load from {"elements": [...], "table": [[...]]} (indices into elements)."""
        return cls(obj["elements"], obj["table"], name=obj.get("name", "table"))

    @classmethod
    def from_json_file(cls, path: str) -> "FiniteMonoid":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


class GSet:
    """Finite set with a right or left action of a finite monoid.

    The table is indexed act[x][g]: for side "right" it is x.g, for side
    "left" it is g.x.  Unit and associativity laws are verified.
    """

    def __init__(self, monoid: FiniteMonoid, size: int,
                 act: Sequence[Sequence[int]], side: str):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.monoid = monoid
        self.size = size
        self.side = side
        self.act_table = tuple(tuple(int(v) for v in row) for row in act)
        if len(self.act_table) != size or any(len(r) != len(monoid) for r in self.act_table):
            raise ValueError("action table must be size x |G|")
        if any(not 0 <= v < size for row in self.act_table for v in row):
            raise ValueError("action value out of range")
        e = monoid.identity
        for x in range(size):
            if self.act_table[x][e] != x:
                raise MonoidLawError("identity does not act trivially")
        for x in range(size):
            for g in range(len(monoid)):
                for h in range(len(monoid)):
                    if side == "right":
                        # x.(gh) = (x.g).h
                        lhs = self.act_table[x][monoid.mul(g, h)]
                        rhs = self.act_table[self.act_table[x][g]][h]
                    else:
                        # (gh).y = g.(h.y)
                        lhs = self.act_table[x][monoid.mul(g, h)]
                        rhs = self.act_table[self.act_table[x][h]][g]
                    if lhs != rhs:
                        raise MonoidLawError("action is not associative")

    def act(self, x: int, g: int) -> int:
        return self.act_table[x][g]

    @classmethod
    def point(cls, monoid: FiniteMonoid, side: str) -> "GSet":
        return cls(monoid, 1, [[0] * len(monoid)], side)


@dataclass
class BarComplex:
    """Normalized chains of the k-truncated bar construction."""

    monoid: FiniteMonoid
    x_set: GSet
    y_set: GSet
    k: int
    bases: list[list[tuple[int, tuple[int, ...], int]]]
    boundaries: list[Optional[IntMatrix]] = field(default_factory=list)

    def dim_counts(self) -> list[int]:
        return [len(b) for b in self.bases]


def build_bar(monoid: FiniteMonoid, x_set: Optional[GSet], y_set: Optional[GSet],
              k: int) -> BarComplex:
    """Chain complex of B_k(X, G, Y); None for X or Y means the point."""
    if not 0 <= k <= MAX_TRUNCATION:
        raise ValueError(f"truncation {k} outside supported range 0..{MAX_TRUNCATION}")
    if len(monoid) > MAX_MONOID_SIZE:
        raise ValueError(f"monoid of order {len(monoid)} exceeds guard {MAX_MONOID_SIZE}")
    x_set = x_set or GSet.point(monoid, "right")
    y_set = y_set or GSet.point(monoid, "left")
    if x_set.side != "right" or y_set.side != "left":
        raise ValueError("X must carry a right action and Y a left action")
    if x_set.monoid is not monoid or y_set.monoid is not monoid:
        raise ValueError("actions must be over the given monoid")

    e = monoid.identity
    nonident = [g for g in range(len(monoid)) if g != e]
    bases: list[list[tuple[int, tuple[int, ...], int]]] = []
    for i in range(k + 1):
        basis = [(x, gs, y)
                 for x in range(x_set.size)
                 for gs in itertools.product(nonident, repeat=i)
                 for y in range(y_set.size)]
        bases.append(basis)

    index = [ {elt: j for j, elt in enumerate(basis)} for basis in bases ]
    boundaries: list[Optional[IntMatrix]] = [None]
    for i in range(1, k + 1):
        entries: dict[tuple[int, int], int] = {}
        for col, (x, gs, y) in enumerate(bases[i]):
            faces: list[tuple[int, tuple[int, tuple[int, ...], int]]] = []
            faces.append((1, (x_set.act(x, gs[0]), gs[1:], y)))
            for t in range(1, i):
                prod = monoid.mul(gs[t - 1], gs[t])
                if prod != e:
                    face = (x, gs[:t - 1] + (prod,) + gs[t + 1:], y)
                    faces.append((-1 if t % 2 else 1, face))
            sign = -1 if i % 2 else 1
            faces.append((sign, (x, gs[:-1], y_set.act(y, gs[-1]))))
            for coeff, face in faces:
                row = index[i - 1][face]
                key = (row, col)
                entries[key] = entries.get(key, 0) + coeff
        boundaries.append(IntMatrix(len(bases[i - 1]), len(bases[i]), entries))

    for i in range(2, k + 1):
        if not boundaries[i - 1].matmul(boundaries[i]).is_zero():
            raise AssertionError(f"bar boundary composite nonzero in degree {i}")
    return BarComplex(monoid, x_set, y_set, k, bases, boundaries)


def bar_homology(bc: BarComplex, p: Optional[int] = None,
                 max_degree: Optional[int] = None) -> list[HomologyGroup]:
    """Per-degree homology of the truncated bar complex.

    For i < k this is H_i of the space B_k(X, G, Y); degree k is the top of
    the complex and reports cycles (the skeleton's own homology).  When
    max_degree is given, only degrees 0..max_degree are computed (and then
    every returned degree uses the full boundary above it).
    """
    if max_degree is None or max_degree >= bc.k:
        return chain_homology(bc.dim_counts(), bc.boundaries, p)
    upto = max_degree + 1
    sliced = chain_homology(bc.dim_counts()[:upto + 1], bc.boundaries[:upto + 1], p)
    return sliced[:max_degree + 1]

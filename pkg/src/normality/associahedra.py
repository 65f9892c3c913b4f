"""Cubical cell model of the associahedra induced by [0, oo] edge lengths.

A point of the n-th associahedron is a canonical metric tree; the open cells
are indexed by a tree together with the subset of internal edges pinned at
infinity (the remaining coordinates run over (0, oo), zero coordinates having
been collapsed away).  The cell of (tree, pinned) has dimension
|I(tree)| - |pinned|, so the complex has sum over trees of 2^|I| cells in
total and exactly one top cell per binary tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional

from .exactlin import HomologyGroup, IntMatrix, chain_homology
from .trees import (EdgeId, MetricTree, Tree, canonicalize, collapse_edge,
                    edge_str, enumerate_trees, internal_edges, leaves,
                    serialize)

MAX_CELL_LEAVES = 8


def point_equal(a: MetricTree, b: MetricTree) -> bool:
    """Whether two metric trees represent the same point of the associahedron."""
    if leaves(a.tree) != leaves(b.tree):
        raise ValueError("leaf counts differ; the points live in different spaces")
    return canonicalize(a) == canonicalize(b)


@dataclass(frozen=True)
class CubicalCell:
    tree: Tree
    pinned: frozenset[EdgeId]

    def __post_init__(self):
        if not self.pinned <= set(internal_edges(self.tree)):
            raise ValueError("pinned set contains a non-edge")

    @property
    def dim(self) -> int:
        return len(internal_edges(self.tree)) - len(self.pinned)

    def key(self) -> tuple[str, tuple[EdgeId, ...]]:
        return (serialize(self.tree), tuple(sorted(self.pinned)))

    def to_json(self) -> dict:
        return {"tree": serialize(self.tree),
                "pinned": [edge_str(e) for e in sorted(self.pinned)],
                "dim": self.dim}


def _check_n(n: int) -> None:
    if not 2 <= n <= MAX_CELL_LEAVES:
        raise ValueError(f"leaf count {n} outside supported range 2..{MAX_CELL_LEAVES}")


def cells(n: int) -> list[CubicalCell]:
    """All cells of the n-th associahedron, sorted by (dim, cell key)."""
    _check_n(n)
    out = []
    for t in enumerate_trees(n):
        edges = internal_edges(t)
        for size in range(len(edges) + 1):
            for subset in itertools.combinations(edges, size):
                out.append(CubicalCell(t, frozenset(subset)))
    out.sort(key=lambda c: (c.dim, c.key()))
    return out


def f_vector(n: int) -> list[int]:
    """Cell counts by dimension, computed from the edge-count distribution."""
    _check_n(n)
    top = n - 2
    counts = [0] * (top + 1)
    for t in enumerate_trees(n):
        e = len(internal_edges(t))
        for d in range(e + 1):
            counts[d] += comb(e, d)
    return counts


def euler(n: int) -> int:
    fv = f_vector(n)
    return sum((-1) ** d * c for d, c in enumerate(fv))


@dataclass
class ChainComplexDescription:
    """Per-dimension cell bases and the integer boundary matrices between them."""

    n: int
    cells_by_dim: list[list[CubicalCell]]
    boundaries: list[Optional[IntMatrix]]  # boundaries[d] : C_d -> C_{d-1}

    def dim_counts(self) -> list[int]:
        return [len(cs) for cs in self.cells_by_dim]


def boundary(n: int) -> ChainComplexDescription:
    """Assemble the cubical chain complex of the n-th associahedron.

    Each free coordinate (an unpinned internal edge, coordinates ordered by
    edge identifier) contributes its 0-face, which collapses the edge, minus
    its oo-face, which pins it, with the sign (-1)^position.  The composite
    of two boundaries is verified to vanish.
    """
    _check_n(n)
    all_cells = cells(n)
    top = n - 2
    cells_by_dim: list[list[CubicalCell]] = [[] for _ in range(top + 1)]
    for c in all_cells:
        cells_by_dim[c.dim].append(c)
    index: dict[tuple, int] = {}
    for cs in cells_by_dim:
        for i, c in enumerate(cs):
            index[c.key()] = i

    boundaries: list[Optional[IntMatrix]] = [None]
    for d in range(1, top + 1):
        entries: dict[tuple[int, int], int] = {}
        for col, cell in enumerate(cells_by_dim[d]):
            free = sorted(set(internal_edges(cell.tree)) - cell.pinned)
            for pos, e in enumerate(free):
                sign = -1 if pos % 2 else 1
                collapsed, id_map = collapse_edge(cell.tree, e)
                zero_face = CubicalCell(collapsed,
                                        frozenset(id_map[s] for s in cell.pinned))
                inf_face = CubicalCell(cell.tree, cell.pinned | {e})
                for face, coeff in ((zero_face, sign), (inf_face, -sign)):
                    row = index[face.key()]
                    key = (row, col)
                    entries[key] = entries.get(key, 0) + coeff
        boundaries.append(IntMatrix(len(cells_by_dim[d - 1]), len(cells_by_dim[d]),
                                    entries))

    for d in range(2, top + 1):
        if not boundaries[d - 1].matmul(boundaries[d]).is_zero():
            raise AssertionError(f"boundary composite nonzero in degree {d}")
    return ChainComplexDescription(n, cells_by_dim, boundaries)


def homology(n: int, p: Optional[int] = None) -> list[HomologyGroup]:
    """Cellular homology of the n-th associahedron over Z (p=None) or F_p."""
    desc = boundary(n)
    return chain_homology(desc.dim_counts(), desc.boundaries, p)

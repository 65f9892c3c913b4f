from fractions import Fraction
from math import comb

import pytest

from normality.associahedra import (CubicalCell, boundary, cells, euler,
                                    f_vector, homology, point_equal)
from normality.trees import (INFINITY, MetricTree, canonicalize, corolla,
                             enumerate_trees, internal_edges, metric, parse)


def test_point_equal_defining_relation():
    t = parse("((**)*)")
    with_zero = metric(t, {(0,): 0})
    collapsed = metric(corolla(3))
    assert point_equal(with_zero, collapsed)
    assert point_equal(metric(corolla(3)), metric(corolla(3)))
    a = metric(parse("((**)*)"), fill=Fraction(1))
    b = metric(parse("(*(**))"), fill=Fraction(1))
    assert not point_equal(a, b)
    with pytest.raises(ValueError):
        point_equal(metric(corolla(2)), metric(corolla(3)))


def test_cells_k3():
    cs = cells(3)
    assert len(cs) == 5
    dims = sorted(c.dim for c in cs)
    assert dims == [0, 0, 0, 1, 1]  # 3 vertices, 2 edges: an interval split in two


def test_cells_counts_and_f_vectors():
    assert f_vector(4) == [11, 15, 5]
    assert f_vector(5) == [45, 93, 63, 14]
    for n in range(2, 7):
        total = sum(2 ** len(internal_edges(t)) for t in enumerate_trees(n))
        assert len(cells(n)) == total == sum(f_vector(n))
        # per-dimension closed form
        for d, count in enumerate(f_vector(n)):
            expected = sum(comb(len(internal_edges(t)), d) for t in enumerate_trees(n))
            assert count == expected


def test_cells_duplicate_free_and_dim_range():
    for n in range(2, 6):
        cs = cells(n)
        keys = {c.key() for c in cs}
        assert len(keys) == len(cs)
        assert max(c.dim for c in cs) == n - 2
        top = [c for c in cs if c.dim == n - 2]
        # top cells are exactly the unpinned binary trees
        assert all(not c.pinned for c in top)
        assert len(top) == len(enumerate_trees(n, binary_only=True))


def test_boundary_closure_property():
    for n in range(3, 6):
        desc = boundary(n)
        index = {c.key() for dim_cells in desc.cells_by_dim for c in dim_cells}
        for d in range(1, n - 1):
            m = desc.boundaries[d]
            assert m.ncols == len(desc.cells_by_dim[d])
            for (r, c), v in m.entries.items():
                assert v in (-1, 0, 1) or abs(v) == 1
                assert desc.cells_by_dim[d - 1][r].key() in index


def test_boundary_k3_is_interval():
    desc = boundary(3)
    assert desc.dim_counts() == [3, 2]
    assert desc.boundaries[1].rank_mod(2) == 2 or desc.boundaries[1].rank_mod(3) == 2
    factors = desc.boundaries[1].smith_normal_form()
    assert len(factors) == 2


def test_dd_zero_up_to_seven():
    # boundary() raises if the composite of consecutive boundaries is nonzero
    for n in range(2, 8):
        boundary(n)


def test_euler_characteristic_is_one():
    assert [euler(n) for n in range(2, 9)] == [1] * 7


def test_homology_examples():
    hz = homology(4)
    assert [(g.free_rank, g.torsion) for g in hz] == [(1, ()), (0, ()), (0, ())]
    assert [g.free_rank for g in homology(5, 3)] == [1, 0, 0, 0]


def test_reduced_homology_vanishes():
    for n in range(2, 7):
        for p in (None, 2, 3):
            groups = homology(n, p)
            assert groups[0].free_rank == 1 and not groups[0].torsion
            assert all(g.is_trivial() for g in groups[1:])


def test_cell_validation_and_json():
    t = parse("((**)*)")
    c = CubicalCell(t, frozenset({(0,)}))
    assert c.dim == 0
    assert c.to_json() == {"tree": "((**)*)", "pinned": ["0"], "dim": 0}
    with pytest.raises(ValueError):
        CubicalCell(t, frozenset({(1,)}))
    with pytest.raises(ValueError):
        cells(1)
    with pytest.raises(ValueError):
        cells(9)

import pytest

from normality.barhomology import (FiniteMonoid, GSet, MonoidLawError,
                                   bar_homology, build_bar)


def klein_four():
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    return FiniteMonoid(["e", "a", "b", "ab"], table)


def test_monoid_validation():
    G = FiniteMonoid.cyclic(4)
    assert G.identity == 0 and G.is_group and len(G) == 4
    with pytest.raises(MonoidLawError):
        FiniteMonoid(["e", "x"], [[0, 1], [1, 1]])  # x*x = x: not associative? check identity law
    bad = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]  # breaks associativity
    with pytest.raises(MonoidLawError):
        FiniteMonoid(["e", "a", "b"], bad)


def test_monoid_without_inverses():
    # multiplication semilattice {e, z} with z*z = z is a monoid, not a group
    M = FiniteMonoid(["e", "z"], [[0, 1], [1, 1]])
    assert not M.is_group


def test_build_bar_z2_truncation_two():
    bc = build_bar(FiniteMonoid.cyclic(2), None, None, 2)
    assert bc.dim_counts() == [1, 1, 1]
    assert bc.boundaries[1].to_rows() == [[0]]
    assert bc.boundaries[2].to_rows() == [[2]]


def test_build_bar_degree_one_basis():
    bc = build_bar(FiniteMonoid.cyclic(3), None, None, 1)
    assert bc.dim_counts() == [1, 2]


def test_build_bar_truncation_zero():
    bc = build_bar(FiniteMonoid.cyclic(2), None, None, 0)
    assert bc.dim_counts() == [1]
    h = bar_homology(bc)
    assert len(h) == 1 and h[0].free_rank == 1


def test_bar_homology_projective_plane():
    h = bar_homology(build_bar(FiniteMonoid.cyclic(2), None, None, 2))
    assert [(g.free_rank, g.torsion) for g in h] == [(1, ()), (0, (2,)), (0, ())]


def test_bar_homology_mod2_all_ones():
    h = bar_homology(build_bar(FiniteMonoid.cyclic(2), None, None, 5), p=2)
    assert [g.free_rank for g in h] == [1, 1, 1, 1, 1, 1]


def test_bar_homology_wedge_of_circles():
    h = bar_homology(build_bar(FiniteMonoid.cyclic(3), None, None, 1))
    assert [(g.free_rank, g.torsion) for g in h] == [(1, ()), (2, ())]


def test_h1_is_the_group_for_cyclic():
    for q in range(2, 7):
        for k in (2, 3):
            h = bar_homology(build_bar(FiniteMonoid.cyclic(q), None, None, k))
            assert h[0].free_rank == 1 and not h[0].torsion
            assert h[1].free_rank == 0 and h[1].torsion == (q,)


def test_h1_klein_four():
    h = bar_homology(build_bar(klein_four(), None, None, 2))
    assert h[1].free_rank == 0 and h[1].torsion == (2, 2)


def test_stability_under_truncation_increase():
    for q in range(2, 7):
        G = FiniteMonoid.cyclic(q)
        for k in range(1, 6):
            lower = bar_homology(build_bar(G, None, None, k), None, max_degree=k - 1)
            higher = bar_homology(build_bar(G, None, None, k + 1), None, max_degree=k - 1)
            assert lower == higher, (q, k)


def test_contractible_with_free_right_coordinate():
    # X = G with right translation: the two-sided construction is contractible
    G = FiniteMonoid.cyclic(3)
    x = GSet(G, 3, [[G.mul(a, g) for g in range(3)] for a in range(3)], "right")
    h = bar_homology(build_bar(G, x, None, 3), None, max_degree=2)
    assert [(g.free_rank, g.torsion) for g in h] == [(1, ()), (0, ()), (0, ())]


def test_gset_validation():
    G = FiniteMonoid.cyclic(3)
    with pytest.raises(MonoidLawError):
        GSet(G, 2, [[0, 0, 0], [1, 0, 1]], "right")  # identity must act trivially
    with pytest.raises(ValueError):
        GSet(G, 1, [[0, 0, 0]], "middle")


def test_resource_guards():
    with pytest.raises(ValueError):
        build_bar(FiniteMonoid.cyclic(2), None, None, 9)
    labels = [str(i) for i in range(25)]
    table = [[(a + b) % 25 for b in range(25)] for a in range(25)]
    with pytest.raises(ValueError):
        build_bar(FiniteMonoid(labels, table), None, None, 1)


def test_json_table_loader(tmp_path):
    path = tmp_path / "group.json"
    path.write_text('{"elements": ["e", "g"], "table": [[0, 1], [1, 0]]}')
    G = FiniteMonoid.from_json_file(str(path))
    assert G.is_group and len(G) == 2
    h = bar_homology(build_bar(G, None, None, 2))
    assert h[1].torsion == (2,)

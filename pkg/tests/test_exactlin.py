import random
from fractions import Fraction
from math import gcd

import pytest

from normality.exactlin import (FpMatrix, IntMatrix, PDividesDenominatorError,
                                chain_homology, factorial, is_prime,
                                multinomial, rank_fp, reduce_mod_p,
                                smith_normal_form)


def det_cofactor(rows):
    """Independent determinant oracle by cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for c in range(n):
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        total += (-1) ** c * rows[0][c] * det_cofactor(minor)
    return total


def test_factorial():
    assert factorial(0) == 1
    assert factorial(6) == 720
    with pytest.raises(ValueError):
        factorial(-1)


def test_multinomial():
    assert multinomial([2, 1]) == 3
    assert multinomial([3]) == 1
    assert multinomial([2, 2, 1]) == 30
    with pytest.raises(ValueError):
        multinomial([1, -2])
    # the Wu coefficient shape (t-1)!/prod(e!) handled by the caller as a rational
    assert Fraction(factorial(2), factorial(3)) == Fraction(1, 3)


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1)
    assert is_prime(2 ** 19 - 1)


def test_reduce_mod_p():
    assert reduce_mod_p(Fraction(1, 3), 5) == 2
    assert reduce_mod_p(Fraction(6, 3), 5) == 2
    assert reduce_mod_p(7, 5) == 2
    assert reduce_mod_p(Fraction(-1, 2), 5) == 2
    with pytest.raises(PDividesDenominatorError):
        reduce_mod_p(Fraction(1, 5), 5)
    with pytest.raises(PDividesDenominatorError):
        reduce_mod_p(Fraction(3, 10), 5)


def test_rank_fp_identity():
    m = FpMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5)
    assert rank_fp(m) == 3


def test_rank_fp_vs_mod_reduction():
    m = FpMatrix.from_rows([[2, 4], [1, 2]], 2)  # reduces to [[0,0],[1,0]]
    assert rank_fp(m) == 1
    assert FpMatrix.from_rows([[3, 0], [0, 3]], 3).rank() == 0


def test_snf_small():
    assert smith_normal_form(IntMatrix.from_rows([[2]])) == [2]
    assert smith_normal_form(IntMatrix.from_rows([[0]])) == []
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]
    assert smith_normal_form(IntMatrix.from_rows([[1, 0], [0, 1]])) == [1, 1]


def test_snf_divisibility_and_det():
    rng = random.Random(7)
    for _ in range(40):
        rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        det = det_cofactor(rows)
        factors = smith_normal_form(IntMatrix.from_rows(rows))
        for a, b in zip(factors, factors[1:]):
            assert b % a == 0
        if det != 0:
            assert len(factors) == 4
            prod = 1
            for f in factors:
                prod *= f
            assert prod == abs(det)
        else:
            assert len(factors) < 4


def test_rank_fp_matches_snf_units():
    # rank over F_p = number of invariant factors coprime to p
    rng = random.Random(11)
    for _ in range(30):
        rows = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(4)]
        m = IntMatrix.from_rows(rows)
        factors = m.smith_normal_form()
        for p in (2, 3, 5):
            coprime = sum(1 for f in factors if f % p)
            assert m.rank_mod(p) == coprime


def test_matmul_and_zero():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert a.matmul(b).to_rows() == [[2, 1], [4, 3]]
    assert not a.matmul(b).is_zero()
    z = IntMatrix(2, 2)
    assert a.matmul(z).is_zero()


def test_chain_homology_projective_plane():
    # 1 -> 1 -> 1 with d1 = 0, d2 = [2]: homology (Z, Z/2, 0)
    d1 = IntMatrix(1, 1)
    d2 = IntMatrix.from_rows([[2]])
    h = chain_homology([1, 1, 1], [None, d1, d2])
    assert [(g.free_rank, g.torsion) for g in h] == [(1, ()), (0, (2,)), (0, ())]
    h2 = chain_homology([1, 1, 1], [None, d1, d2], p=2)
    assert [g.free_rank for g in h2] == [1, 1, 1]
    h3 = chain_homology([1, 1, 1], [None, d1, d2], p=3)
    assert [g.free_rank for g in h3] == [1, 0, 0]

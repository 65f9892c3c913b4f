"""Exact arithmetic and linear algebra shared by the homology and Steenrod layers.

Everything here is exact: arbitrary-precision integers, `fractions.Fraction`
rationals, rank over a prime field and Smith normal form over the integers.
No floating point is used anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Rational = Union[int, Fraction]


class PDividesDenominatorError(ArithmeticError):
    """Raised when a rational with denominator divisible by p is reduced mod p.

    Callers must treat this as a hard computation failure, never as a silent
    zero coefficient.
    """


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for n < 2**31."""
    if n >= 2**31:
        raise ValueError("primality test limited to n < 2**31")
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def multinomial(parts: Sequence[int]) -> int:
    """(sum parts)! / (parts[0]! * parts[1]! * ...), exactly."""
    if any(p < 0 for p in parts):
        raise ValueError(f"negative multinomial part in {list(parts)}")
    result = factorial(sum(parts))
    for p in parts:
        result //= factorial(p)
    return result


def reduce_mod_p(q: Rational, p: int) -> int:
    """Reduce an exact rational mod p, returning the least nonnegative residue.

    Raises PDividesDenominatorError when the denominator is not coprime to p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    num, den = (q.numerator, q.denominator) if isinstance(q, Fraction) else (q, 1)
    if den % p == 0:
        raise PDividesDenominatorError(f"denominator of {q} is divisible by p={p}")
    return num * pow(den, -1, p) % p


class IntMatrix:
    """Sparse exact integer matrix with fixed dimensions.

    Entries are stored as a dict (row, col) -> nonzero int.  Matrices are
    treated as immutable after construction; reductions work on copies.
    """

    def __init__(self, nrows: int, ncols: int,
                 entries: Optional[Mapping[tuple[int, int], int]] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], int] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise ValueError(f"entry ({r},{c}) outside {nrows}x{ncols}")
                if v:
                    self.entries[(r, c)] = int(v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = v
        return cls(nrows, ncols, entries)

    def to_rows(self) -> list[list[int]]:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def entry(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    def is_zero(self) -> bool:
        return not self.entries

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        # row-major view of other for sparse accumulation
        other_rows: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            other_rows.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        return IntMatrix(self.nrows, other.ncols, acc)

    def _row_dicts(self) -> list[dict[int, int]]:
        rows: list[dict[int, int]] = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def rank_mod(self, p: int) -> int:
        """Rank of the reduction mod a prime p."""
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        rows = []
        for d in self._row_dicts():
            row = {c: v % p for c, v in d.items() if v % p}
            if row:
                rows.append(row)
        rank = 0
        while rows:
            # pivot on the sparsest available row to limit fill-in
            piv = min(rows, key=len)
            rows.remove(piv)
            rank += 1
            c0 = min(piv)
            inv = pow(piv[c0], -1, p)
            nxt = []
            for row in rows:
                if c0 in row:
                    f = row[c0] * inv % p
                    for c, v in piv.items():
                        w = (row.get(c, 0) - f * v) % p
                        if w:
                            row[c] = w
                        else:
                            row.pop(c, None)
                if row:
                    nxt.append(row)
            rows = nxt
        return rank

    def smith_normal_form(self) -> list[int]:
        """Nonzero invariant factors d1 | d2 | ... of the matrix.

        Elementary row/column reduction with smallest-magnitude pivoting;
        the diagonal is normalized into a divisibility chain at the end.
        The number of factors equals the rank over the rationals.
        """
        rows = self._row_dicts()
        cols: dict[int, set[int]] = {}
        for r, row in enumerate(rows):
            for c in row:
                cols.setdefault(c, set()).add(r)

        def set_entry(r: int, c: int, v: int) -> None:
            if v:
                if c not in rows[r]:
                    cols.setdefault(c, set()).add(r)
                rows[r][c] = v
            elif c in rows[r]:
                del rows[r][c]
                cols[c].discard(r)
                if not cols[c]:
                    del cols[c]

        def add_row(dst: int, src: int, mult: int) -> None:
            for c, v in list(rows[src].items()):
                set_entry(dst, c, rows[dst].get(c, 0) + mult * v)

        def add_col(dst: int, src: int, mult: int) -> None:
            for r in list(cols.get(src, ())):
                set_entry(r, dst, rows[r].get(dst, 0) + mult * rows[r][src])

        diag: list[int] = []
        live_rows = {r for r, row in enumerate(rows) if row}
        while live_rows:
            # smallest-magnitude pivot among live entries
            pr, pc, pv = -1, -1, 0
            for r in live_rows:
                for c, v in rows[r].items():
                    if pv == 0 or abs(v) < abs(pv):
                        pr, pc, pv = r, c, v
                        if abs(v) == 1:
                            break
                if abs(pv) == 1:
                    break
            while True:
                if pv < 0:
                    for c in list(rows[pr]):
                        set_entry(pr, c, -rows[pr][c])
                    pv = rows[pr][pc]
                reduced = False
                for r in list(cols.get(pc, ())):
                    if r == pr:
                        continue
                    q = rows[r][pc] // pv
                    if q:
                        add_row(r, pr, -q)
                    if pc in rows[r]:  # remainder smaller than pivot: re-pivot
                        pr, pv = r, rows[r][pc]
                        reduced = True
                        break
                if reduced:
                    continue
                for c in list(rows[pr]):
                    if c == pc:
                        continue
                    q = rows[pr][c] // pv
                    if q:
                        add_col(c, pc, -q)
                    if c in rows[pr]:
                        pc, pv = c, rows[pr][c]
                        reduced = True
                        break
                if reduced:
                    continue
                if len(rows[pr]) == 1 and len(cols.get(pc, ())) == 1:
                    break
            diag.append(abs(pv))
            set_entry(pr, pc, 0)
            live_rows = {r for r in live_rows if rows[r]}

        # normalize the diagonal multiset into a divisibility chain
        changed = True
        while changed:
            changed = False
            for i in range(len(diag)):
                for j in range(i + 1, len(diag)):
                    if diag[j] % diag[i]:
                        g = math.gcd(diag[i], diag[j])
                        diag[i], diag[j] = g, diag[i] * diag[j] // g
                        changed = True
        diag.sort()
        return diag


class FpMatrix:
    """Exact matrix over the prime field F_p, entries in [0, p)."""

    def __init__(self, nrows: int, ncols: int,
                 entries: Optional[Mapping[tuple[int, int], int]] = None,
                 p: int = 2):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        reduced = {k: v % p for k, v in (entries or {}).items() if v % p}
        self._m = IntMatrix(nrows, ncols, reduced)
        self.nrows = nrows
        self.ncols = ncols

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "FpMatrix":
        m = IntMatrix.from_rows(rows)
        return cls(m.nrows, m.ncols, m.entries, p)

    def entry(self, r: int, c: int) -> int:
        return self._m.entry(r, c)

    def rank(self) -> int:
        return self._m.rank_mod(self.p)


def rank_fp(m: FpMatrix) -> int:
    return m.rank()


def smith_normal_form(m: IntMatrix) -> list[int]:
    return m.smith_normal_form()


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group: Z^free_rank + sum of Z/t for t in torsion."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def chain_homology(dim_counts: Sequence[int],
                   boundaries: Sequence[Optional[IntMatrix]],
                   p: Optional[int] = None) -> list[HomologyGroup]:
    """Homology of a finite chain complex of free modules.

    dim_counts[d] is the rank of C_d; boundaries[d] is the map C_d -> C_{d-1}
    for d >= 1 (boundaries[0] is ignored and may be None).  The top degree is
    treated as the end of the complex, i.e. H_top = ker(boundary_top).  With
    p=None homology is computed over Z (rank and torsion via Smith normal
    form); otherwise Betti numbers over F_p.
    """
    top = len(dim_counts) - 1
    for d in range(1, top + 1):
        b = boundaries[d]
        if b is None:
            raise ValueError(f"missing boundary in degree {d}")
        if b.ncols != dim_counts[d] or b.nrows != dim_counts[d - 1]:
            raise ValueError(f"boundary {d} has wrong shape")
    if p is None:
        factors = [boundaries[d].smith_normal_form() for d in range(1, top + 1)]
        ranks = [0] + [len(f) for f in factors] + [0]
        out = []
        for d in range(top + 1):
            free = dim_counts[d] - ranks[d] - ranks[d + 1]
            torsion = tuple(t for t in factors[d] if t > 1) if d < top else ()
            out.append(HomologyGroup(free, torsion))
        return out
    ranks = [0] + [boundaries[d].rank_mod(p) for d in range(1, top + 1)] + [0]
    return [HomologyGroup(dim_counts[d] - ranks[d] - ranks[d + 1])
            for d in range(top + 1)]

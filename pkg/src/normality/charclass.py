"""Graded sparse polynomial algebra in Chern or Pontryagin generators over F_p,
the Steenrod operation P^1 on those generators via the mod-p Wu formulas, and
an independent splitting-principle oracle used to cross-check every Wu value.

Conventions.  CHERN(n) carries generators c_2, ..., c_n of cohomological
degree 2i (c_1 = 0 throughout, the special-unitary normalization);
PONTRYAGIN(n) carries p_1, ..., p_n of degree 4i.  All Wu coefficients are
computed as exact rationals and only then reduced mod p; a denominator
divisible by p raises, it never silently drops a term.  The prime 2 is
rejected everywhere: P^1 is an odd-primary operation.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence

from .exactlin import PDividesDenominatorError, factorial, is_prime, reduce_mod_p

Exponents = tuple[int, ...]

MAX_ORACLE_VARS = 6

CHERN = "chern"
PONTRYAGIN = "pontryagin"


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 rejected: P^1 is defined at odd primes only")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class GeneratorFamily:
    """CHERN(n): generators c_2..c_n; PONTRYAGIN(n): generators p_1..p_n."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (CHERN, PONTRYAGIN):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == CHERN and self.n < 2:
            raise ValueError("CHERN family needs n >= 2")
        if self.kind == PONTRYAGIN and self.n < 1:
            raise ValueError("PONTRYAGIN family needs n >= 1")

    @property
    def min_index(self) -> int:
        return 2 if self.kind == CHERN else 1

    @property
    def indices(self) -> range:
        return range(self.min_index, self.n + 1)

    @property
    def num_generators(self) -> int:
        return self.n + 1 - self.min_index

    def slot(self, j: int) -> int:
        if j not in self.indices:
            raise ValueError(f"generator index {j} outside {self.indices}")
        return j - self.min_index

    def name(self, j: int) -> str:
        return f"{'c' if self.kind == CHERN else 'p'}{j}"

    def generator_degree(self, j: int) -> int:
        return (2 if self.kind == CHERN else 4) * j

    def weighted_degree(self, exponents: Exponents) -> int:
        """Sum of j * e_j; the cohomological degree is 2 (resp. 4) times this."""
        return sum(j * e for j, e in zip(self.indices, exponents))

    def monomial_str(self, exponents: Exponents) -> str:
        parts = [f"{self.name(j)}^{e}" if e > 1 else self.name(j)
                 for j, e in zip(self.indices, exponents) if e]
        return "*".join(parts) if parts else "1"


def chern(n: int) -> GeneratorFamily:
    return GeneratorFamily(CHERN, n)


def pontryagin(n: int) -> GeneratorFamily:
    return GeneratorFamily(PONTRYAGIN, n)


@dataclass(frozen=True)
class SparsePoly:
    """Sparse polynomial over F_p in a generator family, optionally truncated
    by total exponent (the quotient by the (k+1)-st power of the augmentation
    ideal).  Terms map exponent vectors to nonzero residues in (0, p)."""

    p: int
    family: GeneratorFamily
    terms: Mapping[Exponents, int] = field(default_factory=dict)
    truncation: Optional[int] = None

    def __post_init__(self):
        _check_odd_prime(self.p)
        clean = {}
        for mono, coeff in self.terms.items():
            if len(mono) != self.family.num_generators:
                raise ValueError(f"exponent vector {mono} has wrong length")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = coeff % self.p
            if c and (self.truncation is None or sum(mono) <= self.truncation):
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, p: int, family: GeneratorFamily,
             truncation: Optional[int] = None) -> "SparsePoly":
        return cls(p, family, {}, truncation)

    @classmethod
    def constant(cls, p: int, family: GeneratorFamily, value: int) -> "SparsePoly":
        return cls(p, family, {(0,) * family.num_generators: value})

    @classmethod
    def generator(cls, p: int, family: GeneratorFamily, j: int) -> "SparsePoly":
        mono = [0] * family.num_generators
        mono[family.slot(j)] = 1
        return cls(p, family, {tuple(mono): 1})

    def _compatible(self, other: "SparsePoly") -> None:
        if self.p != other.p or self.family != other.family:
            raise ValueError("mismatched prime or generator family")

    @staticmethod
    def _merge_truncation(a: Optional[int], b: Optional[int]) -> Optional[int]:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def add(self, other: "SparsePoly") -> "SparsePoly":
        self._compatible(other)
        acc = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc[mono] = acc.get(mono, 0) + coeff
        return SparsePoly(self.p, self.family, acc,
                          self._merge_truncation(self.truncation, other.truncation))

    def scale(self, value: int) -> "SparsePoly":
        return SparsePoly(self.p, self.family,
                          {m: c * value for m, c in self.terms.items()},
                          self.truncation)

    def mul(self, other: "SparsePoly") -> "SparsePoly":
        self._compatible(other)
        acc: dict[Exponents, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, 0) + c1 * c2
        return SparsePoly(self.p, self.family, acc,
                          self._merge_truncation(self.truncation, other.truncation))

    def coefficient(self, exponents: Exponents) -> int:
        if len(exponents) != self.family.num_generators:
            raise ValueError(f"exponent vector {exponents} has wrong length")
        return self.terms.get(tuple(exponents), 0)

    def is_homogeneous(self) -> Optional[int]:
        """The common weighted degree of all terms, or None if mixed/zero."""
        degrees = {self.family.weighted_degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def sorted_terms(self) -> list[tuple[Exponents, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            mstr = self.family.monomial_str(mono)
            if mstr == "1":
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(mstr)
            else:
                parts.append(f"{coeff}*{mstr}")
        return " + ".join(parts)

    def to_json_terms(self) -> list[dict]:
        return [{"exponents": list(m), "coeff": c} for m, c in self.sorted_terms()]

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparsePoly) and self.p == other.p
                and self.family == other.family and self.terms == other.terms)

    def __hash__(self):
        return hash((self.p, self.family, tuple(sorted(self.terms.items()))))


def poly_mul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a.mul(b)


def truncate(a: SparsePoly, k: int) -> SparsePoly:
    """Discard monomials of total exponent above k and record the truncation."""
    if k < 0:
        raise ValueError("truncation level must be nonnegative")
    return SparsePoly(a.p, a.family,
                      {m: c for m, c in a.terms.items() if sum(m) <= k}, k)


def _weighted_vectors(weight: int, indices: Sequence[int]) -> Iterator[Exponents]:
    """All exponent vectors over `indices` with sum of j * e_j equal to weight."""
    if not indices:
        if weight == 0:
            yield ()
        return
    j = indices[0]
    for e in range(weight // j + 1):
        for rest in _weighted_vectors(weight - j * e, indices[1:]):
            yield (e,) + rest


def _wu_bracket(total_degree: int, numerator: int, t: int) -> Fraction:
    """total_degree - numerator/(t-1), with the empty numerator counting as 0.

    The t = 1 stratum (a single generator of full weight) always has an empty
    numerator sum, which is the case the convention covers; a nonzero
    numerator with t = 1 cannot occur.
    """
    if numerator == 0:
        return Fraction(total_degree)
    if t == 1:
        raise AssertionError("nonzero Wu numerator in a single-generator stratum")
    return total_degree - Fraction(numerator, t - 1)


@functools.lru_cache(maxsize=None)
def wu_p1_chern(p: int, n: int, i: int) -> SparsePoly:
    """P^1 c_i in F_p[c_2..c_n], homogeneous of cohomological degree 2i + 2(p-1).

    Each coefficient over the exponent vectors of weight i + p - 1 is the
    signed multinomial (-1)^(t-1) (t-1)!/(prod e_j!) times the bracket
    (i+p-1) - [sum over j <= i-1 of (i+p-1-j) e_j]/(t-1), evaluated as an
    exact rational and reduced mod p.
    """
    fam = chern(n)
    _check_odd_prime(p)
    if not 2 <= i <= n:
        raise ValueError(f"index i={i} outside 2..{n}")
    weight = i + p - 1
    terms: dict[Exponents, int] = {}
    for vec in _weighted_vectors(weight, list(fam.indices)):
        t = sum(vec)
        numerator = sum((weight - j) * e
                        for j, e in zip(fam.indices, vec) if j <= i - 1)
        coeff = Fraction((-1) ** (t - 1) * factorial(t - 1))
        for e in vec:
            coeff /= factorial(e)
        coeff *= _wu_bracket(weight, numerator, t)
        residue = reduce_mod_p(coeff, p)
        if residue:
            terms[vec] = residue
    return SparsePoly(p, fam, terms)


@functools.lru_cache(maxsize=None)
def wu_p1_pontryagin(p: int, n: int, i: int) -> SparsePoly:
    """P^1 p_i in F_p[p_1..p_n], homogeneous of degree 4i + 2(p-1).

    The exponent vectors have weight i + (p-1)/2 and the bracket uses the
    doubled degrees 2i + p - 1 and 2j.  The sign is (-1)^(t-1+(p-1)/2): the
    splitting-principle oracle fixes it, and every spot value (for example
    P^1 p_1 = 2 p_1^2 mod 3) confirms that choice.
    """
    fam = pontryagin(n)
    _check_odd_prime(p)
    if not 1 <= i <= n:
        raise ValueError(f"index i={i} outside 1..{n}")
    weight = i + (p - 1) // 2
    total_degree = 2 * i + p - 1
    terms: dict[Exponents, int] = {}
    for vec in _weighted_vectors(weight, list(fam.indices)):
        t = sum(vec)
        numerator = sum((total_degree - 2 * j) * e
                        for j, e in zip(fam.indices, vec) if j <= i - 1)
        coeff = Fraction((-1) ** (t - 1 + (p - 1) // 2) * factorial(t - 1))
        for e in vec:
            coeff /= factorial(e)
        coeff *= _wu_bracket(total_degree, numerator, t)
        residue = reduce_mod_p(coeff, p)
        if residue:
            terms[vec] = residue
    return SparsePoly(p, fam, terms)


def wu_p1(p: int, family: GeneratorFamily, i: int) -> SparsePoly:
    if family.kind == CHERN:
        return wu_p1_chern(p, family.n, i)
    return wu_p1_pontryagin(p, family.n, i)


def p1_table(p: int, family: GeneratorFamily) -> dict[int, SparsePoly]:
    """P^1 on every generator of the family, keyed by generator index."""
    return {j: wu_p1(p, family, j) for j in family.indices}


def p1_extend(f: SparsePoly, table: Mapping[int, SparsePoly]) -> SparsePoly:
    """Extend P^1 from generators to polynomials by the Cartan derivation rule
    (additive, and P^1(ab) = P^1(a) b + a P^1(b) on these even classes)."""
    fam = f.family
    result = SparsePoly.zero(f.p, fam, f.truncation)
    for mono, coeff in f.terms.items():
        for slot, e in enumerate(mono):
            if not e:
                continue
            j = fam.min_index + slot
            if j not in table:
                raise KeyError(f"P^1 table missing generator index {j}")
            lowered = list(mono)
            lowered[slot] -= 1
            base = SparsePoly(f.p, fam, {tuple(lowered): coeff * e}, f.truncation)
            result = result.add(base.mul(table[j]))
    return result


def coefficient(f: SparsePoly, exponents: Exponents) -> int:
    return f.coefficient(exponents)


# ---------------------------------------------------------------------------
# splitting-principle oracle
# ---------------------------------------------------------------------------
#
# Symmetric polynomials in degree-2 line classes x_1..x_n (Chern) or in the
# squares x_t = t_t^2 of such classes (Pontryagin), as dicts mapping exponent
# tuples to residues.  P^1 acts as the derivation with P^1 x = x^p on lines,
# so x -> x^(a + p - 1) per factor for Chern and x -> 2 x^(a + (p-1)/2) for
# the squared variables.  The result is re-expressed in the elementary
# symmetric basis by leading-term elimination, and e_1 = 0 is substituted in
# the Chern case.

_SymPoly = dict[Exponents, int]


def _sym_mul(a: _SymPoly, b: _SymPoly, p: int) -> _SymPoly:
    out: _SymPoly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(u + v for u, v in zip(m1, m2))
            r = (out.get(m, 0) + c1 * c2) % p
            if r:
                out[m] = r
            else:
                out.pop(m, None)
    return out


def _elementary(nvars: int, k: int, p: int) -> _SymPoly:
    out: _SymPoly = {}
    for positions in _subsets(nvars, k):
        mono = [0] * nvars
        for t in positions:
            mono[t] = 1
        out[tuple(mono)] = 1 % p
    return out


def _subsets(nvars: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations(range(nvars), k)


@functools.lru_cache(maxsize=None)
def _e_product(nvars: int, exps: Exponents, p: int) -> tuple[tuple[Exponents, int], ...]:
    """Expansion of prod e_k^{exps[k-1]} as a symmetric polynomial (hashable)."""
    poly: _SymPoly = {(0,) * nvars: 1 % p}
    for k, e in enumerate(exps, start=1):
        ek = _elementary(nvars, k, p)
        for _ in range(e):
            poly = _sym_mul(poly, ek, p)
    return tuple(sorted(poly.items()))


def _to_e_basis(sym: _SymPoly, nvars: int, p: int) -> dict[Exponents, int]:
    """Rewrite a symmetric polynomial in the elementary basis.

    Leading-term elimination: the lex-greatest monomial of a symmetric
    polynomial is a partition (l_1 >= ... >= l_n) and is matched by
    e_1^(l_1-l_2) ... e_n^(l_n).  A failure to cancel signals a bug.
    """
    work = dict(sym)
    out: dict[Exponents, int] = {}
    while work:
        lead = max(work)
        c = work[lead]
        if any(lead[t] < lead[t + 1] for t in range(nvars - 1)):
            raise RuntimeError("leading monomial is not a partition; input not symmetric")
        exps = tuple(lead[t] - (lead[t + 1] if t + 1 < nvars else 0)
                     for t in range(nvars))
        for mono, ec in _e_product(nvars, exps, p):
            r = (work.get(mono, 0) - c * ec) % p
            if r:
                work[mono] = r
            else:
                work.pop(mono, None)
        if lead in work:
            raise RuntimeError("leading term failed to cancel; oracle bug")
        out[exps] = (out.get(exps, 0) + c) % p
    return {m: c for m, c in out.items() if c}


def splitting_oracle(p: int, family: GeneratorFamily, i: int) -> SparsePoly:
    """Independent computation of P^1 on the i-th generator via line classes."""
    _check_odd_prime(p)
    n = family.n
    if n > MAX_ORACLE_VARS:
        raise ValueError(f"oracle guarded to n <= {MAX_ORACLE_VARS}")
    if i not in family.indices:
        raise ValueError(f"index i={i} outside {family.indices}")
    if family.kind == CHERN:
        bump, factor = p - 1, 1
    else:
        bump, factor = (p - 1) // 2, 2
    e_i = _elementary(n, i, p)
    image: _SymPoly = {}
    for mono, c in e_i.items():
        for t in range(n):
            if not mono[t]:
                continue
            new = list(mono)
            new[t] += bump
            key = tuple(new)
            r = (image.get(key, 0) + c * mono[t] * factor) % p
            if r:
                image[key] = r
            else:
                image.pop(key, None)
    in_e = _to_e_basis(image, n, p)
    fam_terms: dict[Exponents, int] = {}
    for exps, c in in_e.items():
        if family.kind == CHERN:
            if exps[0]:
                continue  # substitute e_1 = 0
            fam_terms[exps[1:]] = c
        else:
            fam_terms[exps] = c
    return SparsePoly(p, family, fam_terms)


# ---------------------------------------------------------------------------
# closed-form witness coefficient
# ---------------------------------------------------------------------------

def _witness_closed_fraction(k: int, lprime: int, j: int, m: int, n: int) -> Fraction:
    if k < 1 or lprime < 0:
        raise ValueError("need k >= 1 and lprime >= 0")
    if not (j == 0 or 2 <= j < m):
        raise ValueError(f"witness index j={j} must be 0 or in [2, {m})")
    ell2 = lprime + (0 if j == 0 else 1)
    if k + ell2 < 2:
        raise ValueError("degenerate stratum k + l'' < 2; no closed form "
                         "(the single-generator Wu term applies instead)")
    sign = (-1) ** (k + ell2 - 1)
    return Fraction(sign * factorial(k + ell2 - 2),
                    factorial(k - 1) * factorial(lprime)) * ((k - 1) * n + lprime * m + j)


def closed_form_witness_coeff(k: int, lprime: int, j: int, m: int, n: int,
                              p: int) -> int:
    """Coefficient of c_j c_m^l' c_n^k in P^1 c_i, where i is determined by
    i + p - 1 = kn + l'm + j, evaluated by the closed form
    (-1)^(k+l''-1) (k+l''-2)!/((k-1)! l'!) ((k-1)n + l'm + j) mod p
    with l'' = l' for j = 0 and l' + 1 otherwise."""
    _check_odd_prime(p)
    return reduce_mod_p(_witness_closed_fraction(k, lprime, j, m, n), p)


def closed_form_witness_coeff_pontryagin(k: int, lprime: int, j: int, m: int,
                                         n: int, p: int) -> int:
    """Pontryagin analog, for the coefficient of p_j p_m^l' p_n^k in P^1 p_i
    with i + (p-1)/2 = kn + l'm + j: twice the Chern closed form with the
    extra sign (-1)^((p-1)/2) coming from the Pontryagin Wu sign."""
    _check_odd_prime(p)
    q = 2 * (-1) ** ((p - 1) // 2) * _witness_closed_fraction(k, lprime, j, m, n)
    return reduce_mod_p(q, p)


def witness_monomial(family: GeneratorFamily, k: int, lprime: int, j: int,
                     m: int) -> Exponents:
    """Exponent vector of (generator_j)^1 (generator_m)^l' (generator_n)^k."""
    mono = [0] * family.num_generators
    mono[family.slot(family.n)] += k
    mono[family.slot(m)] += lprime
    if j:
        mono[family.slot(j)] += 1
    return tuple(mono)

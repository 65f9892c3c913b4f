"""Decision engine for p-local higher homotopy normality of the inclusions
SU(m) in SU(n) and SO(2m+1) in SO(2n+1).

The engine decides nothing by itself: it only applies the arithmetic windows
of the normality and non-normality theorems, a small ledger of individually
known cases, and the monotone closure rule (being normal at (k, l) implies
being normal at every (k', l') <= (k, l), so NORMAL facts propagate downward
and NOT_NORMAL facts upward in the (k, l) order).  Instances outside every
window and every closed ledger fact come back UNDETERMINED.  Non-normality
verdicts can be backed by machine-checkable certificates: a witness monomial
whose P^1 coefficient is computed twice (closed form and generic extraction)
together with the range checks that make the underlying argument valid.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .charclass import (closed_form_witness_coeff,
                        closed_form_witness_coeff_pontryagin, coefficient,
                        chern, pontryagin, witness_monomial, wu_p1_chern,
                        wu_p1_pontryagin)
from .exactlin import is_prime, reduce_mod_p

LEDGER_ENV_VAR = "NORMALITY_LEDGER"


class Family(enum.Enum):
    SU = "su"
    SO_ODD = "so"


class VerdictKind(enum.Enum):
    NORMAL = "NORMAL"
    NOT_NORMAL = "NOT_NORMAL"
    UNDETERMINED = "UNDETERMINED"


class InconsistentRulesError(RuntimeError):
    """Two applicable rules derive opposite verdicts for one instance."""


@dataclass(frozen=True)
class Instance:
    family: Family
    m: int
    n: int
    k: int
    l: int
    p: int

    def __post_init__(self):
        min_m = 2 if self.family is Family.SU else 1
        if not min_m <= self.m < self.n:
            raise ValueError(f"need {min_m} <= m < n, got m={self.m}, n={self.n}")
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive")
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.p == 2 and self.family is not Family.SU:
            raise ValueError("p = 2 is admitted for SU ledger lookups only")

    def describe(self) -> str:
        if self.family is Family.SU:
            groups = f"SU({self.m}) < SU({self.n})"
        else:
            groups = f"SO({2 * self.m + 1}) < SO({2 * self.n + 1})"
        return f"{groups} k={self.k} l={self.l} p={self.p}"


@dataclass(frozen=True)
class Provenance:
    rule: str
    citation: str
    source: Optional[tuple[int, int]] = None  # (k0, l0) for closure-derived facts

    def to_json(self) -> dict:
        return {"rule": self.rule, "citation": self.citation,
                "source": list(self.source) if self.source else None}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    provenance: Optional[Provenance]

    def to_json(self) -> dict:
        return {"verdict": self.kind.value,
                "provenance": self.provenance.to_json() if self.provenance else None}


def normal_threshold(family: Family, m: int, n: int, k: int, l: int) -> int:
    """Least prime bound above which the inclusion is an N_k(l)-map p-locally.

    SU: kn + lm.  SO(2m+1) < SO(2n+1): 2kn + 2lm, reading the general
    surjective-restriction normality bound through the degree dictionary
    (top generator degree 4m - 1 = 2(2m) - 1, so m and n double).
    """
    if family is Family.SU:
        return k * n + l * m
    return 2 * k * n + 2 * l * m


def nonnormal_window(family: Family, m: int, n: int, k: int, l: int) -> tuple[int, int]:
    """Half-open prime interval (lo, hi] on which non-normality is certified.

    The m = 2 (SU) and m = 1 (SO) inclusions use their widened windows; the
    interval may be empty (hi <= lo).
    """
    if family is Family.SU:
        if m == 2:
            return (max(k * n - 2, (k - 1) * n + 2), k * n + 2 * (l - 1))
        return (max(k * n - m, (k - 1) * n + 2), k * n + (l - 2) * m)
    if m == 1:
        return (max(2 * k * n - 4, 2 * (k - 1) * n + 2), 2 * k * n + 2 * l - 3)
    return (max(2 * k * n - 2 * m, 2 * (k - 1) * n + 2),
            2 * k * n + 2 * (l - 2) * m - 1)


def _uses_special_window(family: Family, m: int) -> bool:
    return (family is Family.SU and m == 2) or (family is Family.SO_ODD and m == 1)


# ---------------------------------------------------------------------------
# ledger of individually known cases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LedgerEntry:
    """One recorded fact at (k, l); m or n of None matches every valid rank pair."""

    entry_id: str
    family: Family
    m: Optional[int]
    n: Optional[int]
    k: int
    l: int
    p: int
    verdict: VerdictKind
    citation: str

    def matches_groups(self, inst: Instance) -> bool:
        return (self.family is inst.family and self.p == inst.p
                and self.m in (None, inst.m) and self.n in (None, inst.n))


JAMES_SU_P2 = LedgerEntry(
    entry_id="JAMES_SU_P2",
    family=Family.SU, m=None, n=None, k=1, l=1, p=2,
    verdict=VerdictKind.NOT_NORMAL,
    citation="James: SU(m) < SU(n) is not 2-locally normal at the first stage "
             "for any 2 <= m < n",
)

SU23_P5_NORMAL_11 = LedgerEntry(
    entry_id="SU23_P5_NORMAL_11",
    family=Family.SU, m=2, n=3, k=1, l=1, p=5,
    verdict=VerdictKind.NORMAL,
    citation="SU(2) < SU(3) is 5-locally normal at stage (1, 1)",
)

# Prose claim that SU(2) < SU(3) is 3-locally normal at every stage.  It
# contradicts the m = 2 non-normality window at (k, l, p) = (1, 1, 3), so it
# is NOT part of the default ledger; load it explicitly to make the
# consistency sweep surface the conflict.  The minimal conflicting stage
# (1, 1) is recorded.
SU23_P3_PROSE_ANNOTATION = LedgerEntry(
    entry_id="SU23_P3_PROSE",
    family=Family.SU, m=2, n=3, k=1, l=1, p=3,
    verdict=VerdictKind.NORMAL,
    citation="prose claim: SU(2) < SU(3) is 3-locally normal at every stage "
             "(conflicts with the m=2 window at (1,1,3))",
)

DEFAULT_LEDGER: tuple[LedgerEntry, ...] = (JAMES_SU_P2, SU23_P5_NORMAL_11)


def ledger_from_json(data: Iterable[dict]) -> tuple[LedgerEntry, ...]:
    """Entries from a JSON list of {family, m, n, k, l, p, verdict, citation};
    m or n may be null to match every rank pair."""
    out = []
    for idx, obj in enumerate(data):
        out.append(LedgerEntry(
            entry_id=obj.get("id", f"LEDGER_{idx}"),
            family=Family(obj["family"]),
            m=obj["m"], n=obj["n"], k=int(obj["k"]), l=int(obj["l"]),
            p=int(obj["p"]),
            verdict=VerdictKind(obj["verdict"]),
            citation=obj.get("citation", ""),
        ))
    return tuple(out)


def load_ledger(path: Optional[str] = None) -> tuple[LedgerEntry, ...]:
    """The shipped ledger, unless a JSON override is given (argument or the
    NORMALITY_LEDGER environment variable)."""
    path = path or os.environ.get(LEDGER_ENV_VAR)
    if not path:
        return DEFAULT_LEDGER
    with open(path, encoding="utf-8") as fh:
        return ledger_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _window_provenances(inst: Instance) -> tuple[list[Provenance], list[Provenance]]:
    normals: list[Provenance] = []
    nots: list[Provenance] = []
    threshold = normal_threshold(inst.family, inst.m, inst.n, inst.k, inst.l)
    if inst.p >= threshold:
        normals.append(Provenance(
            "NORMAL_WINDOW",
            f"p={inst.p} >= {threshold}, the surjective-restriction normality bound"))
    if inst.p > 2:
        lo, hi = nonnormal_window(inst.family, inst.m, inst.n, inst.k, inst.l)
        if lo < inst.p <= hi:
            rule = ("NONNORMAL_WINDOW_M2" if _uses_special_window(inst.family, inst.m)
                    else "NONNORMAL_WINDOW_GENERAL")
            nots.append(Provenance(
                rule, f"non-normality window {lo} < p <= {hi} contains p={inst.p}"))
    return normals, nots


def _ledger_provenances(inst: Instance,
                        ledger: Sequence[LedgerEntry]) -> tuple[list[Provenance], list[Provenance]]:
    normals: list[Provenance] = []
    nots: list[Provenance] = []
    for entry in ledger:
        if not entry.matches_groups(inst):
            continue
        at_entry = (inst.k, inst.l) == (entry.k, entry.l)
        if entry.verdict is VerdictKind.NORMAL and inst.k <= entry.k and inst.l <= entry.l:
            rule = "LEDGER" if at_entry else "MONOTONE_CLOSURE"
            normals.append(Provenance(
                f"{rule}:{entry.entry_id}", entry.citation,
                None if at_entry else (entry.k, entry.l)))
        elif entry.verdict is VerdictKind.NOT_NORMAL and inst.k >= entry.k and inst.l >= entry.l:
            rule = "LEDGER" if at_entry else "MONOTONE_CLOSURE"
            nots.append(Provenance(
                f"{rule}:{entry.entry_id}", entry.citation,
                None if at_entry else (entry.k, entry.l)))
    return normals, nots


def classify(inst: Instance,
             ledger: Optional[Sequence[LedgerEntry]] = None) -> Verdict:
    """NORMAL, NOT_NORMAL, or UNDETERMINED with provenance.

    A verdict comes from the normality threshold, the applicable
    non-normality window, or a ledger fact closed monotonically in (k, l).
    Opposite derivations raise InconsistentRulesError rather than picking a
    side.
    """
    ledger = DEFAULT_LEDGER if ledger is None else tuple(ledger)
    normals, nots = _window_provenances(inst)
    ledger_normals, ledger_nots = _ledger_provenances(inst, ledger)
    normals += ledger_normals
    nots += ledger_nots
    if normals and nots:
        raise InconsistentRulesError(
            f"{inst.describe()}: NORMAL by {normals[0].rule} but NOT_NORMAL "
            f"by {nots[0].rule}")
    if normals:
        return Verdict(VerdictKind.NORMAL, normals[0])
    if nots:
        return Verdict(VerdictKind.NOT_NORMAL, nots[0])
    return Verdict(VerdictKind.UNDETERMINED, None)


# ---------------------------------------------------------------------------
# witnesses and certificates
# ---------------------------------------------------------------------------

STATUS_VALIDATED = "VALIDATED"
STATUS_WITNESS_NOT_FOUND = "WITNESS_NOT_FOUND"
STATUS_CHECK_FAILED = "CHECK_FAILED"

CHECK_NAMES = ("coefficient_nonzero", "range_check_1", "range_check_2",
               "source_absent")


def _require_in_window(inst: Instance) -> None:
    if inst.p == 2:
        raise ValueError("witness machinery requires an odd prime")
    lo, hi = nonnormal_window(inst.family, inst.m, inst.n, inst.k, inst.l)
    if not lo < inst.p <= hi:
        raise ValueError(
            f"{inst.describe()} lies outside the non-normality window ({lo}, {hi}]")


def _degree_offset(inst: Instance) -> int:
    # weight contributed by P^1: p - 1 for Chern, (p-1)/2 for Pontryagin
    return inst.p - 1 if inst.family is Family.SU else (inst.p - 1) // 2


def find_witness(inst: Instance) -> Optional[tuple[int, int, int]]:
    """Exhaustive search for the lexicographically least witness (l', i, j).

    The monomial (gen_j) (gen_m)^l' (gen_n)^k must sit in degree i + offset
    with m+1 <= i <= n, j = 0 or 2 <= j < m and l'm + j <= (l-1)m; the
    widened m = 2 (SU) / m = 1 (SO) searches take j = 0 with l' up to l.
    """
    _require_in_window(inst)
    offset = _degree_offset(inst)
    target = inst.k * inst.n
    if _uses_special_window(inst.family, inst.m):
        lprimes = range(0, inst.l + 1)
        js = (0,)
        budget = inst.l * inst.m
    else:
        lprimes = range(0, inst.l)
        js = (0,) + tuple(range(2, inst.m))
        budget = (inst.l - 1) * inst.m
    for lp in lprimes:
        for i in range(inst.m + 1, inst.n + 1):
            for j in sorted(js):
                if lp * inst.m + j > budget:
                    continue
                if i + offset == target + lp * inst.m + j:
                    return (lp, i, j)
    return None


@dataclass(frozen=True)
class Certificate:
    instance: Instance
    witness: Optional[tuple[int, int, int]]  # (l', i, j)
    coefficient: Optional[int]
    checks: Optional[dict[str, bool]]
    status: str

    def to_json(self) -> dict:
        inst = self.instance
        return {
            "family": inst.family.value, "m": inst.m, "n": inst.n,
            "k": inst.k, "l": inst.l, "p": inst.p,
            "witness": (None if self.witness is None else
                        {"lprime": self.witness[0], "i": self.witness[1],
                         "j": self.witness[2]}),
            "coefficient": self.coefficient,
            "checks": self.checks,
            "status": self.status,
        }


def _witness_coefficient_closed(inst: Instance, lp: int, j: int) -> int:
    """Closed-form witness coefficient; the degenerate single-generator
    stratum k + l'' = 1 (only reachable as k=1, l'=0, j=0) is evaluated from
    its Wu term directly."""
    if inst.k == 1 and lp == 0 and j == 0:
        if inst.family is Family.SU:
            return reduce_mod_p(Fraction(inst.k * inst.n), inst.p)
        value = (-1) ** ((inst.p - 1) // 2) * 2 * inst.k * inst.n
        return reduce_mod_p(Fraction(value), inst.p)
    if inst.family is Family.SU:
        return closed_form_witness_coeff(inst.k, lp, j, inst.m, inst.n, inst.p)
    return closed_form_witness_coeff_pontryagin(inst.k, lp, j, inst.m, inst.n,
                                                inst.p)


def _witness_coefficient_extracted(inst: Instance, lp: int, i: int, j: int) -> int:
    if inst.family is Family.SU:
        fam = chern(inst.n)
        poly = wu_p1_chern(inst.p, inst.n, i)
    else:
        fam = pontryagin(inst.n)
        poly = wu_p1_pontryagin(inst.p, inst.n, i)
    return coefficient(poly, witness_monomial(fam, inst.k, lp, j, inst.m))


def certify(inst: Instance) -> Certificate:
    """Witness search plus the dual-route coefficient computation and the
    range checks validating the non-normality argument for this instance."""
    witness = find_witness(inst)
    if witness is None:
        return Certificate(inst, None, None, None, STATUS_WITNESS_NOT_FOUND)
    lp, i, j = witness
    closed = _witness_coefficient_closed(inst, lp, j)
    extracted = _witness_coefficient_extracted(inst, lp, i, j)
    if closed != extracted:
        raise InconsistentRulesError(
            f"{inst.describe()}: closed-form coefficient {closed} disagrees "
            f"with generic extraction {extracted}")
    ell2 = lp + (0 if j == 0 else 1)
    anchor = (inst.k - 1) * inst.n + lp * inst.m + j
    if inst.family is Family.SU:
        s = inst.k * inst.n - (inst.p - 1)
    else:
        s = inst.k * inst.n - (inst.p - 1) // 2
    checks = {
        "coefficient_nonzero": closed != 0,
        "range_check_1": 0 < anchor < inst.p,
        "range_check_2": inst.k + ell2 - 2 < inst.p,
        "source_absent": not (inst.m < s < inst.n),
    }
    status = STATUS_VALIDATED if all(checks.values()) else STATUS_CHECK_FAILED
    return Certificate(inst, witness, closed, checks, status)


# ---------------------------------------------------------------------------
# grid sweeps and consistency
# ---------------------------------------------------------------------------

def grid_instances(family: Family, n_max: int, k_max: int, l_max: int,
                   p_max: int, include_p2: bool = False) -> Iterator[Instance]:
    """All valid instances with m < n <= n_max, k <= k_max, l <= l_max and
    odd primes p <= p_max (plus p = 2 for SU when requested), sorted."""
    min_m = 2 if family is Family.SU else 1
    primes = [p for p in range(3, p_max + 1, 2) if is_prime(p)]
    if include_p2 and family is Family.SU:
        primes = [2] + primes
    for m in range(min_m, n_max):
        for n in range(m + 1, n_max + 1):
            for k in range(1, k_max + 1):
                for l in range(1, l_max + 1):
                    for p in primes:
                        yield Instance(family, m, n, k, l, p)


@dataclass(frozen=True)
class Conflict:
    family: Family
    m: int
    n: int
    k: int
    l: int
    p: int
    normal_rule: str
    not_normal_rule: str

    def describe(self) -> str:
        return (f"{self.family.value} m={self.m} n={self.n} k={self.k} "
                f"l={self.l} p={self.p}: NORMAL by {self.normal_rule} vs "
                f"NOT_NORMAL by {self.not_normal_rule}")


def consistency_sweep(n_max: int, k_max: int, l_max: int, p_max: int,
                      families: Sequence[Family] = (Family.SU, Family.SO_ODD),
                      ledger: Optional[Sequence[LedgerEntry]] = None) -> list[Conflict]:
    """Monotone closure of every applicable fact over the grid; returns every
    instance carrying both a NORMAL and a NOT_NORMAL derivation."""
    ledger = DEFAULT_LEDGER if ledger is None else tuple(ledger)
    conflicts: list[Conflict] = []
    primes = [p for p in range(2, p_max + 1) if is_prime(p)]
    for family in families:
        min_m = 2 if family is Family.SU else 1
        for m in range(min_m, n_max):
            for n in range(m + 1, n_max + 1):
                for p in primes:
                    if p == 2 and family is not Family.SU:
                        continue
                    normal_at: dict[tuple[int, int], str] = {}
                    not_at: dict[tuple[int, int], str] = {}
                    for k in range(1, k_max + 1):
                        for l in range(1, l_max + 1):
                            inst = Instance(family, m, n, k, l, p)
                            normals, nots = _window_provenances(inst)
                            ln, lt = _ledger_provenances(inst, ledger)
                            # record only facts asserted AT (k, l); closure is
                            # applied uniformly below
                            normals += [pv for pv in ln if pv.source is None]
                            nots += [pv for pv in lt if pv.source is None]
                            if normals:
                                normal_at[(k, l)] = normals[0].rule
                            if nots:
                                not_at[(k, l)] = nots[0].rule
                    for k in range(1, k_max + 1):
                        for l in range(1, l_max + 1):
                            normal_src = None
                            for (k0, l0), rule in sorted(normal_at.items()):
                                if k <= k0 and l <= l0:
                                    normal_src = (rule if (k0, l0) == (k, l)
                                                  else f"closure({k0},{l0}):{rule}")
                                    break
                            not_src = None
                            for (k0, l0), rule in sorted(not_at.items()):
                                if k >= k0 and l >= l0:
                                    not_src = (rule if (k0, l0) == (k, l)
                                               else f"closure({k0},{l0}):{rule}")
                                    break
                            if normal_src and not_src:
                                conflicts.append(Conflict(family, m, n, k, l, p,
                                                          normal_src, not_src))
    return conflicts

"""The finite search: which exponents survive the reduced bounds, the
residual-order tables, elimination of every candidate, and the solution set.

Notation: e_1, e_2, e_3 are the exponents for bases 2, 3, 5, and
X_i = repunit(a_i, e_i) = sigma(a_i^(e_i - 1)).  The smallest of the three
X_i is called x; its logarithm is bounded by the lattice step.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .factoring import (
    COMPOSITE,
    DEFAULT_EFFORT,
    Effort,
    FactorDb,
    FactorizationRecord,
    OMEGA_GE_3,
    OMEGA_LE_2,
    UNRESOLVED,
    divisors,
    factor,
    factor_repunit,
    is_prime,
    perfect_power,
    repunit,
    screen_omega,
)
from .mparith import ln_interval
from .orders import (
    DEFAULT_SMOOTH_BOUND,
    EXACT,
    OrderFact,
    UnresolvedOrder,
    effective_orders,
    exact_order,
    exponent_shape_ok,
    exponents_for_order,
    factor_q_minus_1,
    multiple_fact,
)

BASES = (2, 3, 5)
INDEX = {2: 1, 3: 2, 5: 3}

PRIME = "prime"
PRIME_POWER = "prime_power"
SEMIPRIME = "semiprime"
EXCLUDED_OMEGA3 = "excluded_omega3"
EXCLUDED_NOT_PRIME_POWER = "excluded_not_prime_power"

# repunits above this many base-a digits are not expanded during elimination
EXPAND_LIMIT = 30000
TABLE_RHO_STEPS = 300_000


class UnresolvedCandidate(RuntimeError):
    def __init__(self, base: int, exponent: int, reason: str):
        super().__init__(f"x = repunit({base}, {exponent}): {reason}")
        self.base = base
        self.exponent = exponent


class UnexpectedSurvivor(RuntimeError):
    pass


class MissingFactorization(RuntimeError):
    def __init__(self, missing: Sequence[tuple[int, int]]):
        super().__init__("factorizations needed for " + ", ".join(f"({a}, {e})" for a, e in missing))
        self.missing = list(missing)


@dataclass(frozen=True)
class CandidateX:
    base: int
    exponent: int
    value: int
    cls: str
    record: FactorizationRecord | None = None
    witnesses: tuple[int, ...] = ()

    @property
    def primes(self) -> tuple[int, ...]:
        return self.record.primes if self.record is not None else ()

    @property
    def pq(self) -> tuple[int, int] | None:
        if self.cls == SEMIPRIME:
            p, q = sorted(self.primes)
            return p, q
        return None

    def to_dict(self) -> dict:
        out = {"base": self.base, "exponent": self.exponent, "class": self.cls}
        if self.record is not None and self.cls in (PRIME, PRIME_POWER, SEMIPRIME):
            out["factors"] = self.record.display()
        if self.witnesses:
            out["witnesses"] = [str(w) for w in self.witnesses]
        return out


# -- survey ------------------------------------------------------------------------

def log_below(a: int, e: int, bound: Fraction) -> bool:
    """Certified test of log repunit(a, e) < bound."""
    x = repunit(a, e)
    prec = 30
    while True:
        L = ln_interval(x, prec)
        if L.certainly_lt(bound):
            return True
        if not L.certainly_lt(bound) and L.lo.to_fraction() >= bound:
            return False
        prec += 30


def exponent_cap(a: int, bound: Fraction) -> int:
    """Largest e with log repunit(a, e) < bound."""
    e = 1
    while log_below(a, e + 1, bound):
        e += 1
    return e


def classify(a: int, e: int, two_prime_bound: Fraction, db: FactorDb | None,
             effort: Effort = DEFAULT_EFFORT) -> CandidateX:
    x = repunit(a, e)
    if not log_below(a, e, two_prime_bound):
        # two distinct primes are ruled out here, only a prime power can survive
        if is_prime(x):
            return CandidateX(a, e, x, PRIME, FactorizationRecord(x, (_pf(x),)))
        pp = perfect_power(x)
        if pp and is_prime(pp[0]):
            return CandidateX(a, e, x, PRIME_POWER, FactorizationRecord(x, (_pf(pp[0], pp[1]),)))
        return CandidateX(a, e, x, EXCLUDED_NOT_PRIME_POWER)
    scr = screen_omega(a, e, db, effort)
    if scr.kind == UNRESOLVED:
        raise UnresolvedCandidate(a, e, "omega could not be decided")
    if scr.kind == OMEGA_GE_3:
        return CandidateX(a, e, x, EXCLUDED_OMEGA3, scr.record, scr.witnesses)
    rec = scr.record
    if len(rec.factors) == 1:
        return CandidateX(a, e, x, PRIME if rec.factors[0].exponent == 1 else PRIME_POWER, rec)
    return CandidateX(a, e, x, SEMIPRIME, rec)


def _pf(p: int, k: int = 1):
    from .factoring import COMPUTED, PrimeFactor

    return PrimeFactor(p, k, COMPUTED)


@dataclass
class BaseSurvey:
    base: int
    prime_power_bound: Fraction
    two_prime_bound: Fraction
    cap: int
    candidates: list[CandidateX]
    skipped_shape: list[int]

    @property
    def prime_power(self) -> list[int]:
        return [c.exponent for c in self.candidates if c.cls in (PRIME, PRIME_POWER)]

    @property
    def two_prime(self) -> list[int]:
        return [c.exponent for c in self.candidates if c.cls == SEMIPRIME]

    def partition_ok(self) -> bool:
        """Every exponent 2..cap is accounted for exactly once."""
        seen = sorted([c.exponent for c in self.candidates] + self.skipped_shape)
        return seen == list(range(2, self.cap + 1))

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "cap": self.cap,
            "prime_power": self.prime_power,
            "two_prime": self.two_prime,
            "excluded_shape": len(self.skipped_shape),
            "excluded_omega3": [c.exponent for c in self.candidates if c.cls == EXCLUDED_OMEGA3],
            "excluded_not_prime_power": [c.exponent for c in self.candidates
                                         if c.cls == EXCLUDED_NOT_PRIME_POWER],
        }


def survey_base(a: int, prime_power_bound: Fraction, two_prime_bound: Fraction,
                db: FactorDb | None, effort: Effort = DEFAULT_EFFORT) -> BaseSurvey:
    cap = exponent_cap(a, prime_power_bound)
    cands, skipped = [], []
    for e in range(2, cap + 1):
        if not exponent_shape_ok(a, e):
            skipped.append(e)
            continue
        cands.append(classify(a, e, two_prime_bound, db, effort))
    return BaseSurvey(a, Fraction(prime_power_bound), Fraction(two_prime_bound), cap, cands, skipped)


def exponent_survey(a: int, bound_log_x: Fraction, db: FactorDb | None = None,
                    two_prime_bound: Fraction | None = None, effort: Effort = DEFAULT_EFFORT) -> list[CandidateX]:
    """Classified candidates a^e with log repunit(a, e) < bound_log_x and an
    admissible exponent shape."""
    tp = bound_log_x if two_prime_bound is None else two_prime_bound
    return survey_base(a, bound_log_x, min(tp, bound_log_x), db, effort).candidates


def required_factorizations(bounds: tuple[Fraction, Fraction]) -> list[tuple[int, int]]:
    """(base, exponent) pairs whose omega must be decided from factorizations."""
    out = []
    for a in BASES:
        cap = exponent_cap(a, bounds[1])
        out += [(a, e) for e in range(2, cap + 1) if exponent_shape_ok(a, e)]
    return out


# -- residual order tables ---------------------------------------------------------

@dataclass(frozen=True)
class OrderCell:
    base: int
    modulus: int
    fact: OrderFact | None           # None: base is divisible by the modulus

    def text(self) -> str:
        return "N/A" if self.fact is None else self.fact.cell()

    def to_dict(self) -> dict:
        if self.fact is None:
            return {"base": self.base, "modulus": str(self.modulus), "kind": "n/a"}
        return self.fact.to_dict()


@dataclass(frozen=True)
class TableRow:
    table: int
    exponent: int
    display: str
    cells: tuple[OrderCell, ...]

    def to_dict(self) -> dict:
        return {"table": self.table, "exponent": self.exponent, "factors": self.display,
                "cells": [c.to_dict() for c in self.cells], "text": [c.text() for c in self.cells]}


_FACT_CACHE: dict[tuple[int, int], OrderFact] = {}


def order_fact(a: int, q: int, smooth_bound: int = DEFAULT_SMOOTH_BOUND,
               effort: Effort = Effort(10**5, TABLE_RHO_STEPS)) -> OrderFact | None:
    """Exact order when q - 1 splits, otherwise the certified multiple."""
    if a % q == 0:
        return None
    key = (a, q)
    if key not in _FACT_CACHE:
        _FACT_CACHE[key] = multiple_fact(a, q, smooth_bound, effort)
    return _FACT_CACHE[key]


def _others(a: int) -> tuple[int, int]:
    return tuple(b for b in BASES if b != a)  # type: ignore[return-value]


TABLE_IDS = {(2, "pp"): 1, (2, "two"): 2, (3, "pp"): 3, (3, "two"): 4, (5, "pp"): 5, (5, "two"): 6}


def make_tables(surveys: dict[int, BaseSurvey], smooth_bound: int = DEFAULT_SMOOTH_BOUND) -> list[TableRow]:
    """Rows for prime-power x (orders of the other bases mod p) and for
    two-prime x (orders mod p and mod q)."""
    rows = []
    for a in BASES:
        j, k = _others(a)
        for c in surveys[a].candidates:
            if c.cls in (PRIME, PRIME_POWER):
                p = c.primes[0]
                cells = tuple(OrderCell(b, p, order_fact(b, p, smooth_bound)) for b in (j, k))
                rows.append(TableRow(TABLE_IDS[(a, "pp")], c.exponent, c.record.display(), cells))
            elif c.cls == SEMIPRIME:
                p, q = c.pq
                cells = tuple(OrderCell(b, m, order_fact(b, m, smooth_bound)) for b in (j, k) for m in (p, q))
                rows.append(TableRow(TABLE_IDS[(a, "two")], c.exponent, c.record.display(), cells))
    return rows


def tables_markdown(rows: Sequence[TableRow]) -> str:
    titles = {
        1: "orders of 3, 5 modulo p, p^f = 2^e - 1",
        2: "orders of 3, 5 modulo p, q, pq = 2^e - 1",
        3: "orders of 2, 5 modulo p, p^f = (3^e - 1)/2",
        4: "orders of 2, 5 modulo p, q, pq = (3^e - 1)/2",
        5: "orders of 2, 3 modulo p, p^f = (5^e - 1)/4",
        6: "orders of 2, 3 modulo p, q, pq = (5^e - 1)/4",
    }
    out = []
    for t in range(1, 7):
        block = [r for r in rows if r.table == t]
        if not block:
            continue
        two = t % 2 == 0
        heads = ["e", "x"] + ([f"o_{m}({b})" for b in _others((2, 3, 5)[(t - 1) // 2]) for m in ("p", "q")]
                             if two else [f"o_p({b})" for b in _others((2, 3, 5)[(t - 1) // 2])])
        out.append(f"### Table {t}: {titles[t]}\n")
        out.append("| " + " | ".join(heads) + " |")
        out.append("|" + "---|" * len(heads))
        for r in block:
            out.append("| " + " | ".join([str(r.exponent), r.display] + [c.text() for c in r.cells]) + " |")
        out.append("")
    return "\n".join(out)


# -- elimination -------------------------------------------------------------------

@dataclass(frozen=True)
class Survivor:
    """A surviving exponent triple (e_1, e_2, e_3); None marks the free slot of
    a parametric survivor, whose repunit must be a prime power."""

    exponents: tuple[int | None, int | None, int | None]
    primes: tuple[int, ...]
    condition: str = ""

    @property
    def concrete(self) -> bool:
        return None not in self.exponents

    def to_dict(self) -> dict:
        return {"exponents": list(self.exponents), "primes": [str(p) for p in self.primes],
                "condition": self.condition}


@dataclass
class Elimination:
    candidate: CandidateX
    reasons: list[str] = field(default_factory=list)
    survivors: list[Survivor] = field(default_factory=list)

    @property
    def eliminated(self) -> bool:
        return not self.survivors

    def to_dict(self) -> dict:
        return {"base": self.candidate.base, "exponent": self.candidate.exponent,
                "class": self.candidate.cls, "eliminated": self.eliminated,
                "reasons": self.reasons, "survivors": [s.to_dict() for s in self.survivors]}


def _strip(n: int, primes: Iterable[int]) -> int:
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _expand(a: int, e: int, who: CandidateX) -> int:
    if e * math.log10(a) > EXPAND_LIMIT:
        raise UnresolvedCandidate(who.base, who.exponent, f"repunit({a}, {e}) too large to expand")
    return repunit(a, e)


def _exponents_divisible_by(a: int, R: int, reasons: list[str]) -> list[int]:
    try:
        ords, fact = effective_orders(a, R)
    except UnresolvedOrder as exc:
        raise UnresolvedCandidate(a, 0, str(exc)) from exc
    if a % R == 0:
        reasons.append(f"{R} divides {a}, so it divides no repunit of base {a}")
        return []
    if not ords:
        shown = fact.cell() if fact is not None else "?"
        reasons.append(f"o_{R}({a}) = {shown}: not 1, a prime, a prime square (or 6 for base 2)")
        return []
    out = sorted({e for o in ords for e in exponents_for_order(a, o)})
    label = "o*" if (a - 1) % R == 0 else "o"
    reasons.append(f"{label}_{R}({a}) = {ords[0]}: {R} | repunit({a}, e) forces e in {out}")
    return out


def _power_of(v: int, a: int) -> int | None:
    e = 0
    while v > 1 and v % a == 0:
        v //= a
        e += 1
    return e if v == 1 else None


def _prime_power_root(n: int) -> tuple[int, int] | None:
    if is_prime(n):
        return n, 1
    pp = perfect_power(n)
    if pp and is_prime(pp[0]):
        return pp
    return None


def _single_prime_repunit(a: int, R: int) -> list[int]:
    """Exponents e >= 2 with repunit(a, e) a power of R.  Only R and R^2 can
    occur: no repunit of base 2, 3 or 5 with e > 2 is a higher perfect power,
    and for e = 2 the values are 3, 4, 6."""
    out = []
    for g in (1, 2):
        e = _power_of((a - 1) * R**g + 1, a)
        if e is not None and e >= 2:
            out.append(e)
    return out


def _triple(i: int, ei: int, j: int, ej: int | None, k: int, ek: int | None) -> tuple:
    t: list[int | None] = [None, None, None]
    t[INDEX[i] - 1], t[INDEX[j] - 1], t[INDEX[k] - 1] = ei, ej, ek
    return tuple(t)


def _lemma24_pair(a: int, e: int, b: int, f: int) -> bool:
    """The only coincident prime-power repunits across bases 2, 3, 5."""
    return {(a, e), (b, f)} == {(2, 5), (5, 3)}


def eliminate(cand: CandidateX) -> Elimination:
    """Decide whether x = repunit(a_i, e_i) can be the smallest of the three
    repunits in a solution, and if so list the survivors."""
    out = Elimination(cand)
    if cand.cls == SEMIPRIME:
        _eliminate_two_prime(cand, out)
    elif cand.cls in (PRIME, PRIME_POWER):
        _eliminate_prime_power(cand, out)
    else:
        out.reasons.append(f"x is {cand.cls}")
    return out


def _eliminate_two_prime(cand: CandidateX, out: Elimination) -> None:
    a, e = cand.base, cand.exponent
    P, Q = cand.pq
    allowed = {P, Q}
    out.reasons.append(f"x = {cand.record.display()}, all repunits must be supported on {{{P}, {Q}}}")
    viable: dict[int, list[int]] = {}
    for b in _others(a):
        cands = sorted(set(_exponents_divisible_by(b, P, out.reasons)) |
                       set(_exponents_divisible_by(b, Q, out.reasons)))
        good: list[int] = []
        for f in cands:
            if any(d in cands and d not in good for d in divisors(f)[1:-1]):
                out.reasons.append(f"repunit({b}, {f}) contains a rejected repunit({b}, d), d | {f}")
                continue
            rest = _strip(_expand(b, f, cand), allowed)
            if rest == 1:
                good.append(f)
            else:
                out.reasons.append(f"repunit({b}, {f}) has a prime outside {{{P}, {Q}}} (cofactor {_short(rest)})")
        if not good:
            out.reasons.append(f"no admissible e for base {b}: repunit({b}, e) must contain {P} or {Q}")
            return
        viable[b] = good
    j, k = _others(a)
    for fj, fk in itertools.product(viable[j], viable[k]):
        out.survivors.append(Survivor(_triple(a, e, j, fj, k, fk), (P, Q)))


def _short(n: int) -> str:
    s = str(n)
    return s if len(s) <= 20 else f"C{len(s)}"


def _eliminate_prime_power(cand: CandidateX, out: Elimination) -> None:
    a, e = cand.base, cand.exponent
    P = cand.primes[0]
    out.reasons.append(f"x = {cand.record.display()} is a power of {P}")
    alpha: dict[int, list[tuple[int, int | None]]] = {}
    for b in _others(a):
        lst = []
        for f in _exponents_divisible_by(b, P, out.reasons):
            rest = _strip(_expand(b, f, cand), (P,))
            if rest == 1:
                lst.append((f, None))
                continue
            root = _prime_power_root(rest)
            if root is None:
                out.reasons.append(f"repunit({b}, {f}) / {P}^k = {_short(rest)} is not a prime power")
            else:
                lst.append((f, root[0]))
        alpha[b] = lst
    j, k = _others(a)
    survivors: set[Survivor] = set()

    def one_sided(s: int, t: int) -> None:
        # s takes an alpha option, t has no factor P
        for f, R in alpha[s]:
            if R is None:
                if _lemma24_pair(a, e, s, f):
                    cond = f"repunit({t}, e) is a prime power, not a power of {P}"
                    survivors.add(Survivor(_triple(a, e, s, f, t, None), (P,), cond))
                else:
                    out.reasons.append(f"repunit({a}, {e}) and repunit({s}, {f}) both powers of {P}: "
                                       "excluded by the coincidence of prime-power repunits")
                continue
            hits = _single_prime_repunit(t, R)
            for g in hits:
                survivors.add(Survivor(_triple(a, e, s, f, t, g), (P, R)))
            if not hits:
                out.reasons.append(f"repunit({t}, e) would have to be a power of {R}: no such e")

    one_sided(j, k)
    one_sided(k, j)
    for (fj, Rj), (fk, Rk) in itertools.product(alpha[j], alpha[k]):
        if Rj is not None and Rk is not None and Rj != Rk:
            out.reasons.append(f"repunit({j}, {fj}) and repunit({k}, {fk}) bring two different second primes")
            continue
        R = Rj or Rk
        survivors.add(Survivor(_triple(a, e, j, fj, k, fk), (P,) if R is None else (P, R)))
    # neither j nor k divisible by P: both powers of one prime Q != P
    if {j, k} == {2, 5}:
        if P != 31:
            survivors.add(Survivor(_triple(a, e, 2, 5, 5, 3), (P, 31)))
        else:
            out.reasons.append("repunit(2, 5) = repunit(5, 3) = 31 would be divisible by P")
    else:
        out.reasons.append(f"repunits of bases {j}, {k} both powers of one prime: excluded "
                           "by the coincidence of prime-power repunits")
    out.survivors.extend(sorted(survivors, key=_survivor_key))


def _survivor_key(s: Survivor):
    return tuple(-1 if x is None else x for x in s.exponents), s.primes


# -- solutions ---------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionFamily:
    label: str
    kind: str                               # "triple" or "parametric"
    abc: tuple[int | None, int | None, int | None]
    primes: tuple[int, ...] = ()
    condition: str = ""
    members: tuple[int, ...] = ()           # for the parametric family: b values found

    def to_dict(self) -> dict:
        out = {"label": self.label, "kind": self.kind, "abc": list(self.abc),
               "primes": [str(p) for p in self.primes]}
        if self.condition:
            out["condition"] = self.condition
        if self.members:
            out["members_b"] = list(self.members)
        return out


def sigma_support(a: int, b: int, c: int) -> set[int]:
    primes: set[int] = set()
    for base, k in ((2, a), (3, b), (5, c)):
        if k:
            primes.update(factor(repunit(base, k + 1)).primes)
    return primes


def family_of(abc: tuple[int, int, int]) -> str | None:
    a, b, c = abc
    if abc == (1, 1, 1):
        return "i"
    if (a, c) == (4, 2):
        if b == 1:
            return "ii"
        if b == 4:
            return "iii"
        if is_prime(repunit(3, b + 1)):
            return "iv"
    return None


def family_iv_members(limit: int) -> tuple[int, ...]:
    """b <= limit with sigma(3^b) (probable) prime; b + 1 must be prime."""
    return tuple(b for b in range(1, limit + 1) if is_prime(b + 1) and is_prime(repunit(3, b + 1)))


THEOREM_FAMILIES = ("i", "ii", "iii", "iv")


def theorem_families(limit: int = 1000) -> list[SolutionFamily]:
    return [
        SolutionFamily("i", "triple", (1, 1, 1), (2, 3)),
        SolutionFamily("ii", "triple", (4, 1, 2), (2, 31)),
        SolutionFamily("iii", "triple", (4, 4, 2), (11, 31)),
        SolutionFamily("iv", "parametric", (4, None, 2), (31,), "sigma(3^b) is prime",
                       family_iv_members(limit)),
    ]


@dataclass
class SolveReport:
    surveys: dict[int, BaseSurvey]
    eliminations: list[Elimination]
    families: list[SolutionFamily]
    survivor_map: list[tuple[Survivor, str]]
    bounds: tuple[Fraction, Fraction]

    @property
    def matches_theorem(self) -> bool:
        return sorted(f.label for f in self.families) == list(THEOREM_FAMILIES)

    def to_dict(self) -> dict:
        return {
            "bounds": {"prime_power": str(float(self.bounds[0])), "two_prime": str(float(self.bounds[1]))},
            "surveys": {str(a): s.to_dict() for a, s in sorted(self.surveys.items())},
            "eliminations": [e.to_dict() for e in self.eliminations],
            "survivors": [{"survivor": s.to_dict(), "family": f} for s, f in self.survivor_map],
            "families": [f.to_dict() for f in self.families],
            "matches_theorem": self.matches_theorem,
        }


def classify_survivor(s: Survivor) -> str:
    if s.concrete:
        abc = tuple(x - 1 for x in s.exponents)
        if len(sigma_support(*abc)) > 2:
            raise UnexpectedSurvivor(f"{s.exponents} fails the direct check")
        fam = family_of(abc)
        if fam is None:
            raise UnexpectedSurvivor(f"solution {abc} outside the known families")
        return fam
    if s.exponents == (5, None, 3):
        # repunit(3, e) = Q^g: g = 1 gives a prime, g >= 2 only 2^2 (e = 2) and 11^2 (e = 5)
        return "ii/iii/iv"
    raise UnexpectedSurvivor(f"parametric survivor {s.exponents} not understood")


def default_bounds() -> tuple[Fraction, Fraction]:
    from .lattice import reduction_chain

    ch = reduction_chain()
    return ch.prime_power_bound, ch.two_prime_bound


def survey_all(db: FactorDb | None, bounds: tuple[Fraction, Fraction] | None = None,
               effort: Effort = DEFAULT_EFFORT) -> dict[int, BaseSurvey]:
    bounds = bounds or default_bounds()
    return {a: survey_base(a, bounds[0], bounds[1], db, effort) for a in BASES}


def solve(db: FactorDb | None, bounds: tuple[Fraction, Fraction] | None = None,
          family_limit: int = 1000, effort: Effort = DEFAULT_EFFORT,
          surveys: dict[int, BaseSurvey] | None = None) -> SolveReport:
    bounds = bounds or default_bounds()
    surveys = surveys or survey_all(db, bounds, effort)
    elims = []
    for a in BASES:
        for c in surveys[a].candidates:
            if c.cls in (PRIME, PRIME_POWER, SEMIPRIME):
                elims.append(eliminate(c))
    mapped = []
    labels: set[str] = set()
    for el in elims:
        for s in el.survivors:
            fam = classify_survivor(s)
            mapped.append((s, fam))
            labels.update(fam.split("/"))
    fams = [f for f in theorem_families(family_limit) if f.label in labels]
    return SolveReport(surveys, elims, fams, mapped, bounds)


# -- brute force and classical checks ------------------------------------------------

def brute_box(n: int) -> list[tuple[int, int, int]]:
    """All (a, b, c), 1 <= a, b, c <= n, with omega(sigma(2^a 3^b 5^c)) <= 2."""
    sup = {(base, k): set(factor_repunit(base, k + 1).primes) for base in BASES for k in range(1, n + 1)}
    out = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            ab = sup[(2, a)] | sup[(3, b)]
            if len(ab) > 2:
                continue
            for c in range(1, n + 1):
                if len(ab | sup[(5, c)]) <= 2:
                    out.append((a, b, c))
    return out


def families_in_box(n: int) -> list[tuple[int, int, int]]:
    out = [(1, 1, 1), (4, 1, 2), (4, 4, 2)]
    out += [(4, b, 2) for b in family_iv_members(n)]
    return sorted(t for t in out if max(t) <= n)


@dataclass
class SanityReport:
    checks: dict[str, dict]

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def sanity_known_results(bound: int = 200) -> SanityReport:
    checks: dict[str, dict] = {}

    sols = []
    for n in range(1, bound + 1):
        v = 2**n - 3
        if v >= 1:
            m = _power_of(v, 5) if v > 1 else 0
            if m is not None:
                sols.append((n, m))
    checks["2^n - 5^m = 3"] = {"found": sols, "expected": [(2, 0), (3, 1), (7, 3)],
                               "ok": sols == [(2, 0), (3, 1), (7, 3)], "range": f"n <= {bound}"}

    top = max(bound, 300)
    s2 = {repunit(2, a + 1): a for a in range(1, top + 1)}
    eq = sorted((s2[repunit(5, c + 1)], c) for c in range(1, top + 1) if repunit(5, c + 1) in s2)
    checks["sigma(2^a) = sigma(5^c)"] = {"found": eq, "expected": [(4, 2)], "ok": eq == [(4, 2)],
                                         "range": f"a, c <= {top}"}

    pw = []
    for a in range(2, 11):
        for e in range(3, 61):
            pp = perfect_power(repunit(a, e))
            if pp:
                pw.append((a, e, pp[0], pp[1]))
    checks["perfect power repunits"] = {"found": pw, "expected": [(3, 5, 11, 2), (7, 4, 20, 2)],
                                        "ok": pw == [(3, 5, 11, 2), (7, 4, 20, 2)],
                                        "range": "2 <= a <= 10, 3 <= e <= 60"}

    ppow: dict[int, list[tuple[int, int]]] = {}
    for a in BASES:
        for e in range(2, 61):
            root = _prime_power_root(repunit(a, e))
            if root:
                ppow.setdefault(root[0], []).append((a, e))
    coinc = sorted(tuple(v) for v in ppow.values() if len({a for a, _ in v}) > 1)
    checks["coincident prime-power repunits"] = {"found": coinc, "expected": [((2, 5), (5, 3))],
                                                 "ok": coinc == [((2, 5), (5, 3))], "range": "e <= 60"}

    from .orders import primitive_prime_divisors, zsigmondy_has_primitive
    bad = []
    for a in range(2, 9):
        for b in range(1, a):
            if math.gcd(a, b) != 1:
                continue
            for n in range(1, 13):
                if bool(primitive_prime_divisors(a, b, n)) != zsigmondy_has_primitive(a, b, n):
                    bad.append((a, b, n))
    checks["primitive divisors"] = {"mismatches": bad, "ok": not bad, "range": "b < a <= 8, n <= 12"}

    shape_bad = []
    for a in BASES:
        for e in range(2, 41):
            rec = factor_repunit(a, e)
            if rec.status == "complete" and len(rec.factors) <= 2 and not exponent_shape_ok(a, e):
                shape_bad.append((a, e))
    checks["two-prime exponent shapes"] = {"violations": shape_bad, "ok": not shape_bad, "range": "e <= 40"}

    lam_bad = []
    from .baker import lambda_small_bound_holds
    for a in BASES:
        for e in range(2, 61):
            if not lambda_small_bound_holds(a, e):
                lam_bad.append((a, e))
    checks["-log(1 - a^-e) < 1/(a^e - 1)"] = {"violations": lam_bad, "ok": not lam_bad, "range": "e <= 60"}
    return SanityReport(checks)

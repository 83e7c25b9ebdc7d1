"""Primality, bounded factoring and the repunit factor table.

A "repunit" here is the generalised one, (a**e - 1) // (a - 1), so that
sigma(a**(e-1)) == repunit(a, e) for prime a.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

import gmpy2

# Miller-Rabin with the first 13 prime bases is exact below this bound
# (Sorenson & Webster 2015).
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PROBABLE_ROUNDS = 40

COMPOSITE = "composite"
PRIME = "prime"
PROBABLE_PRIME = "probable_prime"


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class VerificationError(ValueError):
    def __init__(self, base: int, exponent: int, reason: str):
        super().__init__(f"({base}, {exponent}): {reason}")
        self.base = base
        self.exponent = exponent
        self.reason = reason


@dataclass(frozen=True)
class PrimeTest:
    status: str
    rounds: int = 0

    def __bool__(self) -> bool:
        return self.status != COMPOSITE


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


@lru_cache(maxsize=65536)
def is_prime(n: int) -> PrimeTest:
    """Deterministic below ``DETERMINISTIC_LIMIT``; BPSW plus 40 random
    Miller-Rabin rounds above it."""
    if n < 2:
        return PrimeTest(COMPOSITE)
    for p in _MR_BASES:
        if n % p == 0:
            return PrimeTest(PRIME if n == p else COMPOSITE)
    if n < 41 * 41:
        return PrimeTest(PRIME)
    if n < DETERMINISTIC_LIMIT:
        ok = all(_strong_probable_prime(n, a) for a in _MR_BASES)
        return PrimeTest(PRIME if ok else COMPOSITE)
    if not gmpy2.is_strong_bpsw_prp(n):
        return PrimeTest(COMPOSITE)
    rng = random.Random(n)
    for _ in range(PROBABLE_ROUNDS):
        if not gmpy2.is_strong_prp(n, rng.randrange(2, n - 1)):
            return PrimeTest(COMPOSITE)
    return PrimeTest(PROBABLE_PRIME, PROBABLE_ROUNDS)


def repunit(a: int, e: int) -> int:
    """(a**e - 1) / (a - 1)."""
    if a < 2 or e < 1:
        raise ValueError("repunit needs a >= 2 and e >= 1")
    return (a**e - 1) // (a - 1)


def integer_root(n: int, k: int) -> tuple[int, bool]:
    r = int(gmpy2.iroot(n, k)[0])
    return r, r**k == n


def perfect_power(n: int) -> tuple[int, int] | None:
    """(r, k) with r**k == n and k >= 2 maximal, or None."""
    if n < 4:
        return None
    best = None
    for k in range(2, n.bit_length() + 1):
        r, exact = integer_root(n, k)
        if r < 2:
            break
        if exact:
            best = (r, k)
    return best


@lru_cache(maxsize=None)
def primes_below(bound: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * bound
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound, i)))
    return tuple(i for i, v in enumerate(sieve) if v)


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


# -- factorization records ----------------------------------------------------

TABLE = "table"
COMPUTED = "computed"


@dataclass(frozen=True)
class PrimeFactor:
    prime: int
    exponent: int
    provenance: str = COMPUTED


@dataclass(frozen=True)
class FactorizationRecord:
    """Complete or partial factorization of ``n``.

    ``cofactor`` is the unfactored remainder; ``cofactor_kind`` says whether
    it is known to be composite or merely not yet split.
    """

    n: int
    factors: tuple[PrimeFactor, ...]
    cofactor: int | None = None
    cofactor_kind: str | None = None

    @property
    def status(self) -> str:
        return "complete" if self.cofactor is None else "partial"

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(f.prime for f in self.factors)

    def exponent_of(self, p: int) -> int:
        for f in self.factors:
            if f.prime == p:
                return f.exponent
        return 0

    def verify(self) -> str | None:
        """Reason the record is inconsistent, or None."""
        prod = 1
        seen = set()
        for f in self.factors:
            if f.prime in seen:
                return f"prime {f.prime} listed twice"
            seen.add(f.prime)
            if f.exponent < 1:
                return f"bad exponent for {f.prime}"
            if not is_prime(f.prime):
                return f"{f.prime} is not prime"
            prod *= f.prime**f.exponent
        if self.cofactor is not None:
            if self.cofactor < 2:
                return "cofactor must exceed 1"
            if self.cofactor_kind == COMPOSITE and is_prime(self.cofactor):
                return "cofactor flagged composite is prime"
            prod *= self.cofactor
        if prod != self.n:
            return "product of factors does not reproduce n"
        return None

    def to_dict(self) -> dict:
        out = {
            "n": str(self.n),
            "factors": [
                {"prime": str(f.prime), "exponent": f.exponent, "provenance": f.provenance}
                for f in self.factors
            ],
            "status": self.status,
        }
        if self.cofactor is not None:
            out["cofactor"] = {"value": str(self.cofactor), "kind": self.cofactor_kind}
        return out

    def display(self) -> str:
        """P<n>-style rendering, as used in published factor tables."""
        parts = []
        for f in self.factors:
            s = str(f.prime) if f.prime < 10**11 else f"P{len(str(f.prime))}"
            parts.append(s if f.exponent == 1 else f"{s}^{f.exponent}")
        if self.cofactor is not None:
            parts.append(f"C{len(str(self.cofactor))}")
        return " x ".join(parts)


def _record_from_dict(n: int, found: dict[int, int], rest: int, provenance: str) -> FactorizationRecord:
    factors = tuple(PrimeFactor(p, k, provenance) for p, k in sorted(found.items()))
    if rest == 1:
        return FactorizationRecord(n, factors)
    kind = COMPOSITE if not is_prime(rest) else None
    if kind is None:
        # a prime remainder is a factor, not a cofactor
        found = dict(found)
        found[rest] = found.get(rest, 0) + 1
        return _record_from_dict(n, found, 1, provenance)
    return FactorizationRecord(n, factors, rest, kind)


# -- bounded factoring --------------------------------------------------------

@dataclass(frozen=True)
class Effort:
    """Budget for ``factor``: trial division bound and Pollard-rho steps."""

    trial_bound: int = 10**5
    rho_steps: int = 200_000


DEFAULT_EFFORT = Effort()


def _brent(n: int, c: int, steps: int) -> tuple[int | None, int]:
    """One Brent-rho run; returns (nontrivial factor or None, steps used)."""
    y, r, q, g, used = 2, 1, 1, 1, 0
    m = 128
    x = ys = y
    nn = gmpy2.mpz(n)
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % nn
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % nn
                q = q * abs(x - y) % nn
            g = math.gcd(int(q), n)
            k += m
        used += r
        r *= 2
        if used > steps:
            return None, used
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % nn
            g = math.gcd(int(abs(x - ys)), n)
    return (int(g) if g != n else None), used


def _split(n: int, budget: list[int]) -> list[int]:
    """Split n into primes as far as the rho budget allows; composites may remain."""
    if n == 1:
        return []
    if is_prime(n):
        return [n]
    pp = perfect_power(n)
    if pp:
        return _split(pp[0], budget) * pp[1]
    c = 1
    while budget[0] > 0:
        g, used = _brent(n, c, budget[0])
        budget[0] -= used
        if g:
            return _split(g, budget) + _split(n // g, budget)
        c += 1
    return [n]


def trial_divide(n: int, candidates: Iterable[int], found: dict[int, int]) -> int:
    for p in candidates:
        if p * p > n:
            break
        if n % p == 0:
            while n % p == 0:
                n //= p
                found[p] = found.get(p, 0) + 1
    return n


def factor(n: int, effort: Effort = DEFAULT_EFFORT) -> FactorizationRecord:
    """Trial division, then Brent's rho within ``effort``."""
    if n < 2:
        raise ValueError("factor needs n >= 2")
    found: dict[int, int] = {}
    rest = trial_divide(n, primes_below(effort.trial_bound), found)
    if rest > 1 and rest < effort.trial_bound**2:
        found[rest] = found.get(rest, 0) + 1
        rest = 1
    composite = 1
    budget = [effort.rho_steps]
    for piece in _split(rest, budget):
        if is_prime(piece):
            found[piece] = found.get(piece, 0) + 1
        else:
            composite *= piece
    return _record_from_dict(n, found, composite, COMPUTED)


def cyclotomic_value(a: int, d: int) -> int:
    """Phi_d(a) via Moebius inversion of a**m - 1 over m | d."""
    num, den = 1, 1
    for m in divisors(d):
        mu = _moebius(d // m)
        if mu == 1:
            num *= a**m - 1
        elif mu == -1:
            den *= a**m - 1
    return num // den


def _moebius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def factor_repunit(a: int, e: int, effort: Effort = DEFAULT_EFFORT) -> FactorizationRecord:
    """Factor repunit(a, e) part by part along its cyclotomic factors.

    Primes dividing Phi_d(a) but not d are 1 mod d (1 mod 2d for odd d), so
    trial division only walks that progression.
    """
    n = repunit(a, e)
    found: dict[int, int] = {}
    composite = 1
    budget = [effort.rho_steps]
    for d in divisors(e)[1:]:
        part = cyclotomic_value(a, d)
        g = math.gcd(part, d)
        for p in (f.prime for f in factor(g).factors) if g > 1 else ():
            while part % p == 0:
                part //= p
                found[p] = found.get(p, 0) + 1
        step = 2 * d if d % 2 else d
        k = step + 1
        while part > 1 and k < effort.trial_bound and k * k <= part:
            while part % k == 0:
                part //= k
                found[k] = found.get(k, 0) + 1
            k += step
        if part > 1 and k * k > part:
            found[part] = found.get(part, 0) + 1
            part = 1
        for piece in _split(part, budget):
            if is_prime(piece):
                found[piece] = found.get(piece, 0) + 1
            else:
                composite *= piece
    return _record_from_dict(n, found, composite, COMPUTED)


# -- factor table -------------------------------------------------------------

@dataclass
class FactorDb:
    records: dict[tuple[int, int], FactorizationRecord] = field(default_factory=dict)
    source: str | None = None
    line_count: int = 0
    provenance: dict[tuple[int, int], str] = field(default_factory=dict)

    def get(self, a: int, e: int) -> FactorizationRecord | None:
        return self.records.get((a, e))

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self.records

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.records))


def parse_factor_line(line: str, line_no: int) -> tuple[int, int, FactorizationRecord, str] | None:
    """Parse ``<base> <exp>: <p>[^k] ... [C<digits>] [| provenance]``."""
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    provenance = TABLE
    if "|" in text:
        text, provenance = (s.strip() for s in text.split("|", 1))
        if not provenance:
            raise ParseError(line_no, "empty provenance")
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError(line_no, "missing ':'")
    try:
        base, exponent = (int(t) for t in head.split())
    except ValueError:
        raise ParseError(line_no, f"bad header {head!r}") from None
    if base < 2 or exponent < 1:
        raise ParseError(line_no, "base must be >= 2 and exponent >= 1")
    found: dict[int, int] = {}
    cofactor = None
    tokens = body.split()
    for i, tok in enumerate(tokens):
        if tok[0] in "Cc":
            if i != len(tokens) - 1:
                raise ParseError(line_no, "cofactor must be the last token")
            try:
                cofactor = int(tok[1:])
            except ValueError:
                raise ParseError(line_no, f"bad cofactor {tok!r}") from None
            continue
        p_s, _, k_s = tok.partition("^")
        try:
            p, k = int(p_s), int(k_s) if k_s else 1
        except ValueError:
            raise ParseError(line_no, f"bad factor {tok!r}") from None
        if p in found:
            raise ParseError(line_no, f"prime {p} repeated")
        found[p] = k
    src = TABLE if provenance == TABLE else COMPUTED
    factors = tuple(PrimeFactor(p, k, src) for p, k in sorted(found.items()))
    rec = FactorizationRecord(repunit(base, exponent), factors, cofactor,
                              COMPOSITE if cofactor is not None else None)
    return base, exponent, rec, provenance


def load_factor_db(path: str | Path) -> FactorDb:
    """Read and verify a factor table.  Nothing is returned unless every
    record checks out."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    records: dict[tuple[int, int], FactorizationRecord] = {}
    provenance: dict[tuple[int, int], str] = {}
    for no, line in enumerate(lines, start=1):
        parsed = parse_factor_line(line, no)
        if parsed is None:
            continue
        base, exponent, rec, prov = parsed
        if (base, exponent) in records:
            raise ParseError(no, f"duplicate entry for ({base}, {exponent})")
        reason = rec.verify()
        if reason:
            raise VerificationError(base, exponent, reason)
        records[(base, exponent)] = rec
        provenance[(base, exponent)] = prov
    return FactorDb(records, str(path), len(lines), provenance)


def dump_factor_db(db: FactorDb) -> str:
    out = []
    for key in db:
        rec = db.records[key]
        toks = [f"{f.prime}^{f.exponent}" if f.exponent > 1 else str(f.prime) for f in rec.factors]
        if rec.cofactor is not None:
            toks.append(f"C{rec.cofactor}")
        prov = db.provenance.get(key, TABLE)
        out.append(f"{key[0]} {key[1]}: {' '.join(toks)} | {prov}")
    return "\n".join(out) + "\n"


BUNDLED_DB = Path(__file__).with_name("data") / "repunit_factors.txt"


@lru_cache(maxsize=4)
def _load_cached(path: str) -> FactorDb:
    return load_factor_db(path)


def default_db(path: str | Path | None = None) -> FactorDb:
    return _load_cached(str(path or BUNDLED_DB))


# -- omega screening -----------------------------------------------------------

OMEGA_LE_2 = "omega_le_2"
OMEGA_GE_3 = "omega_ge_3"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class OmegaScreen:
    """Outcome of deciding whether repunit(a, e) has at most two prime factors.

    For ``omega_ge_3`` the witnesses are distinct primes dividing the number; if
    fewer than three were found, ``cofactor`` is a composite non-prime-power
    remainder coprime to them, which supplies the missing ones.
    """

    kind: str
    record: FactorizationRecord
    witnesses: tuple[int, ...] = ()
    cofactor: int | None = None

    @property
    def omega(self) -> int | None:
        if self.kind == OMEGA_LE_2:
            return len(self.record.factors)
        return None


def repunit_record(a: int, e: int, db: FactorDb | None = None,
                   effort: Effort = DEFAULT_EFFORT) -> FactorizationRecord:
    """Best available factorization: table entry refined by algebraic factors,
    or a fresh bounded factorization."""
    rec = db.get(a, e) if db is not None else None
    if rec is None:
        return factor_repunit(a, e, effort) if e > 1 else FactorizationRecord(1, ())
    return rec


def screen_omega(a: int, e: int, db: FactorDb | None = None,
                 effort: Effort = DEFAULT_EFFORT) -> OmegaScreen:
    if e < 2:
        raise ValueError("screen_omega needs e >= 2")
    n = repunit(a, e)
    rec = repunit_record(a, e, db, effort)
    known = {f.prime for f in rec.factors}
    # algebraic divisors repunit(a, d) | repunit(a, e) for d | e
    for d in divisors(e)[1:-1]:
        sub = repunit_record(a, d, db, effort)
        known.update(f.prime for f in sub.factors)
    found: dict[int, int] = {}
    rest = n
    for p in sorted(known):
        while rest % p == 0:
            rest //= p
            found[p] = found.get(p, 0) + 1
    if rest > 1 and rec.cofactor is None and db is not None and db.get(a, e) is not None:
        raise VerificationError(a, e, "table record and algebraic factors disagree")
    if rest > 1 and rest == rec.cofactor and rec.cofactor_kind == COMPOSITE:
        pass            # the table already gave up on this cofactor
    elif rest > 1:
        extra = factor(rest, effort)
        for f in extra.factors:
            found[f.prime] = found.get(f.prime, 0) + f.exponent
        rest = extra.cofactor or 1
    full = _record_from_dict(n, found, rest, rec.factors[0].provenance if rec.factors else COMPUTED)
    primes = tuple(sorted(found))
    if rest == 1:
        if len(primes) <= 2:
            return OmegaScreen(OMEGA_LE_2, full)
        return OmegaScreen(OMEGA_GE_3, full, primes[:3])
    # a composite remainder coprime to the found primes
    pp = perfect_power(rest)
    if pp and is_prime(pp[0]):
        lower = len(primes) + 1
    else:
        lower = len(primes) + 2
    if lower >= 3:
        if len(primes) >= 3:
            return OmegaScreen(OMEGA_GE_3, full, primes[:3])
        return OmegaScreen(OMEGA_GE_3, full, primes, rest)
    return OmegaScreen(UNRESOLVED, full, primes, rest)

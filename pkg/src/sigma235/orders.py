"""Multiplicative orders modulo primes, partial order facts, and the
admissibility rules that follow from the primitive-divisor theorem.

Throughout, ``o_q(a)`` is the order of a modulo the prime q.  If q divides
repunit(a, e) and q does not divide a - 1, then o_q(a) divides e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .factoring import (
    DEFAULT_EFFORT,
    Effort,
    FactorizationRecord,
    _split,
    divisors,
    factor,
    is_prime,
    perfect_power,
    primes_below,
    repunit,
)

EXACT = "exact"
MULTIPLE_OF = "multiple_of"

DEFAULT_SMOOTH_BOUND = 10**5
_TRIAL_LIMIT = 10**4


class IncompleteFactorization(ValueError):
    pass


@dataclass(frozen=True)
class OrderFact:
    """Either the exact order of ``base`` mod ``modulus`` or a certified divisor
    of it.  ``valuations`` maps each certified prime r to v_r(order)."""

    base: int
    modulus: int
    kind: str
    value: int
    valuations: tuple[tuple[int, int], ...] = ()
    complete: bool = field(default=False, compare=False)

    @classmethod
    def exact(cls, base: int, modulus: int, order: int, known: Iterable[int] = ()) -> OrderFact:
        return cls(base, modulus, EXACT, order, tuple(sorted(_small_factor(order, known).items())), True)

    def verify(self) -> bool:
        """Re-check the fact from scratch with modular powers."""
        a, q = self.base % self.modulus, self.modulus
        if self.kind == EXACT:
            if pow(a, self.value, q) != 1:
                return False
            return all(pow(a, self.value // r, q) != 1 for r, _ in self.valuations)
        for r, v in self.valuations:
            if v == 0:
                continue
            t = _valuation(q - 1, r)
            if v > t or pow(a, (q - 1) // r ** (t - v + 1), q) == 1:
                return False
        return math.prod(r**v for r, v in self.valuations) == self.value

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "modulus": str(self.modulus),
            "kind": self.kind,
            "value": str(self.value),
            "valuations": [[str(r), v] for r, v in self.valuations],
        }

    def cell(self) -> str:
        return str(self.value) if self.kind == EXACT else f"({self.value})"


def _valuation(n: int, r: int) -> int:
    t = 0
    while n % r == 0:
        n //= r
        t += 1
    return t


def _small_factor(n: int, known: Iterable[int] = ()) -> dict[int, int]:
    """Factor n, which is built from primes of q - 1.  ``known`` primes are
    divided out first; the rest goes to trial division, with an early exit
    once the remainder is a prime or a prime power."""
    out: dict[int, int] = {}
    for p in known:
        if p > 1 and n % p == 0:
            out[p] = _valuation(n, p)
            n //= p ** out[p]
    d = 2
    while n > 1 and d * d <= n:
        if d > _TRIAL_LIMIT:
            pp = perfect_power(n) or (n, 1)
            if is_prime(pp[0]):
                out[pp[0]] = out.get(pp[0], 0) + pp[1]
                return out
            rec = factor(n)
            if rec.status != "complete":
                raise IncompleteFactorization(f"could not factor {n}")
            for f in rec.factors:
                out[f.prime] = out.get(f.prime, 0) + f.exponent
            return out
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def order_by_divisors(a: int, q: int, multiple: int) -> int:
    """Least d | multiple with a**d == 1 mod q; ``multiple`` must be a known
    multiple of the order (e.g. the exponent of a repunit q divides)."""
    if pow(a, multiple, q) != 1:
        raise ValueError(f"{a}^{multiple} is not 1 mod {q}")
    for d in divisors(multiple):
        if pow(a, d, q) == 1:
            return d
    raise AssertionError("unreachable")


def exact_order(a: int, q: int, qm1_factors: dict[int, int] | FactorizationRecord) -> int:
    """o_q(a) by descending through the prime factors of q - 1."""
    if isinstance(qm1_factors, FactorizationRecord):
        if qm1_factors.status != "complete":
            raise IncompleteFactorization(f"q-1 for q={q} only partially factored")
        qm1_factors = {f.prime: f.exponent for f in qm1_factors.factors}
    if math.prod(r**k for r, k in qm1_factors.items()) != q - 1:
        raise IncompleteFactorization(f"supplied factors do not multiply to q-1 for q={q}")
    if a % q == 0:
        raise ValueError("base divisible by modulus")
    order = q - 1
    for r, k in qm1_factors.items():
        for _ in range(k):
            if pow(a, order // r, q) == 1:
                order //= r
            else:
                break
    return order


def order_r_valuation(a: int, q: int, r: int, t: int) -> int:
    """v_r(o_q(a)) = t - max{j <= t : a**((q-1)/r**j) == 1 mod q}."""
    if _valuation(q - 1, r) != t:
        raise ValueError(f"{r}^{t} does not exactly divide q-1")
    j = 0
    while j < t and pow(a, (q - 1) // r ** (j + 1), q) == 1:
        j += 1
    return t - j


@dataclass(frozen=True)
class PartialFactorization:
    primes: dict[int, int]
    cofactor: int

    @property
    def complete(self) -> bool:
        return self.cofactor == 1


def factor_q_minus_1(q: int, smooth_bound: int = DEFAULT_SMOOTH_BOUND,
                     effort: Effort = DEFAULT_EFFORT) -> PartialFactorization:
    """Trial division of q - 1 to ``smooth_bound`` followed by a rho attempt on
    what is left; the unsplit remainder is returned as cofactor."""
    n = q - 1
    found: dict[int, int] = {}
    for p in primes_below(smooth_bound):
        if p * p > n:
            break
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    if n > 1 and (n < smooth_bound**2 or is_prime(n)):
        found[n] = found.get(n, 0) + 1
        n = 1
    if n > 1 and effort.rho_steps:
        rest = 1
        for piece in _split(n, [effort.rho_steps]):
            if is_prime(piece):
                found[piece] = found.get(piece, 0) + 1
            else:
                rest *= piece
        n = rest
    return PartialFactorization(found, n)


def multiple_fact(a: int, q: int, smooth_bound: int = DEFAULT_SMOOTH_BOUND,
                  effort: Effort = DEFAULT_EFFORT) -> OrderFact:
    """Order fact from whatever part of q - 1 could be factored.

    Returns an exact fact when q - 1 splits completely, otherwise the
    product of r**v_r(order) over the primes r found.
    """
    part = factor_q_minus_1(q, smooth_bound, effort)
    if part.complete:
        return OrderFact.exact(a, q, exact_order(a, q, part.primes), part.primes)
    vals = []
    for r, t in sorted(part.primes.items()):
        # exact valuation of r in q - 1 (the cofactor has no factor r)
        vals.append((r, order_r_valuation(a, q, r, t)))
    m = math.prod(r**v for r, v in vals)
    return OrderFact(a, q, MULTIPLE_OF, m, tuple((r, v) for r, v in vals if v))


def certify_divides_order(a: int, q: int, n: int) -> bool:
    """True iff n | o_q(a), checked with one power per prime of n."""
    for r, k in _small_factor(n).items():
        t = _valuation(q - 1, r)
        if t < k:
            return False
        if pow(a, (q - 1) // r ** (t - k + 1), q) == 1:
            return False
    return True


# -- admissibility --------------------------------------------------------------

def _is_prime_or_square(n: int) -> bool:
    if n == 1 or is_prime(n):
        return True
    r = math.isqrt(n)
    return r * r == n and bool(is_prime(r))


def _extra_orders(base: int | None) -> frozenset[int]:
    # repunit(2, 6) = 3^2 * 7 is the one exceptional shape for base 2
    return frozenset({6}) if base == 2 else frozenset()


def admissible_order(fact: OrderFact, base: int | None = None) -> bool:
    """Could o_q(a) divide an exponent e for which repunit(a, e) has at most two
    prime factors?  Such e is 1, r or r**2 (plus 6 for base 2), so the order
    must be 1, a prime, or a prime square (or 6 for base 2)."""
    extra = _extra_orders(base if base is not None else fact.base)
    if fact.kind == EXACT:
        return _is_prime_or_square(fact.value) or fact.value in extra
    m = fact.value
    if any(x % m == 0 for x in extra):
        return True
    if m == 1:
        return True
    f = _small_factor(m)
    return len(f) == 1 and next(iter(f.values())) <= 2


def possible_orders(fact: OrderFact) -> list[int] | None:
    """All admissible values the order can take given ``fact``, decided with
    direct powers where the fact leaves freedom.  None means unbounded
    (no information beyond m = 1)."""
    a, q = fact.base, fact.modulus
    extra = _extra_orders(a)
    if fact.kind == EXACT:
        return [fact.value] if admissible_order(fact) else []
    m = fact.value
    cands: set[int] = {x for x in extra if x % m == 0}
    f = _small_factor(m)
    if m == 1:
        return None
    if len(f) == 1:
        r, v = next(iter(f.items()))
        if v <= 2:
            cands.update({r, r * r} if v == 1 else {r * r})
    return sorted(d for d in cands if order_divides(a, q, d) and _minimal(a, q, d))


def order_divides(a: int, q: int, d: int) -> bool:
    return pow(a, d, q) == 1


def _minimal(a: int, q: int, d: int) -> bool:
    return all(pow(a, d // r, q) != 1 for r in _small_factor(d))


# -- structural lemma ----------------------------------------------------------

@dataclass(frozen=True)
class StructureVerdict:
    exponent: int
    admissible: bool
    shapes: tuple[str, ...] = ()
    reason: str = ""


SHAPE_PRIME_P_IS_R = "e=r, p=r"
SHAPE_PRIME_ORDER_R = "e=r, o_p(a)=o_q(a)=r"
SHAPE_SQUARE_CYCLOTOMIC = "e=r^2, (p,q)=(R(a,r), R(a,r^2)/R(a,r))"
SHAPE_SQUARE_MERSENNE_BASE = "e=4, a=2^m-1, p=2, f=m+1"
SHAPE_2_6 = "(a,e)=(2,6), 3^2*7"


def _prime_square_root(e: int) -> int | None:
    r = math.isqrt(e)
    return r if r * r == e and is_prime(r) else None


def lemma22_structure(a: int, e: int, record: FactorizationRecord) -> StructureVerdict:
    """Which exceptional or generic shapes a repunit with at most two prime
    factors can take, checked against the actual factorization."""
    if record.n != repunit(a, e):
        raise ValueError("record does not belong to repunit(a, e)")
    if record.status != "complete" or len(record.factors) > 2:
        return StructureVerdict(e, False, reason="not a product of at most two prime powers")
    primes = record.primes
    shapes: list[str] = []
    if (a, e) == (2, 6) and record.n == 63:
        shapes.append(SHAPE_2_6)
    if is_prime(e):
        r = e
        # primes of the repunit that are r itself, the rest have order r
        others = [p for p in primes if p != r]
        if all(pow(a, r, p) == 1 and a % p != 1 for p in others):
            shapes.append(SHAPE_PRIME_P_IS_R if r in primes else SHAPE_PRIME_ORDER_R)
    r = _prime_square_root(e)
    if r is not None:
        lo, hi = repunit(a, r), repunit(a, e) // repunit(a, r)
        if sorted(primes) == sorted({lo, hi}) and all(f.exponent == 1 for f in record.factors):
            shapes.append(SHAPE_SQUARE_CYCLOTOMIC)
        m = (a + 1).bit_length() - 1
        if e == 4 and a == 2**m - 1 and record.exponent_of(2) == m + 1:
            shapes.append(SHAPE_SQUARE_MERSENNE_BASE)
    if shapes:
        return StructureVerdict(e, True, tuple(shapes))
    if not is_prime(e) and r is None and (a, e) != (2, 6):
        return StructureVerdict(e, False, reason=f"e={e} is neither a prime nor a prime square")
    return StructureVerdict(e, False, reason="factorization fits none of the admissible shapes")


def exponent_shape_ok(a: int, e: int) -> bool:
    """Necessary condition on e alone for repunit(a, e) to have at most two
    prime factors."""
    if is_prime(e) or _prime_square_root(e) is not None:
        return True
    return (a, e) == (2, 6)


def zsigmondy_has_primitive(a: int, b: int, n: int) -> bool:
    """Whether a**n - b**n has a prime divisor not dividing any a**m - b**m,
    m < n (Bang-Zsigmondy exceptions only)."""
    if not (a > b >= 1) or math.gcd(a, b) != 1 or n < 1:
        raise ValueError("need coprime a > b >= 1 and n >= 1")
    if (a, b, n) == (2, 1, 6):
        return False
    if n == 1 and a - b == 1:
        return False
    s = a + b
    if n == 2 and s & (s - 1) == 0:
        return False
    return True


def primitive_prime_divisors(a: int, b: int, n: int) -> list[int]:
    """Brute force: primes of a**n - b**n dividing no earlier term.  Used as
    the independent check of the rule above, for small inputs."""
    from .factoring import factor

    val = a**n - b**n
    if val < 2:
        return []
    earlier = [a**m - b**m for m in range(1, n)]
    return [p for p in factor(val).primes if all(x % p for x in earlier)]


# -- effective orders for the elimination ------------------------------------------

class UnresolvedOrder(ArithmeticError):
    def __init__(self, base: int, modulus: int, reason: str):
        super().__init__(f"order of {base} mod {modulus}: {reason}")
        self.base = base
        self.modulus = modulus


def exponents_for_order(a: int, o: int) -> list[int]:
    """Exponents e with o | e that the two-prime shape allows: r, r^2, and 6
    for base 2."""
    out = set()
    if is_prime(o):
        out.update({o, o * o})
    else:
        r = _prime_square_root(o)
        if r is not None:
            out.add(o)
    if a == 2 and 6 % o == 0 and o > 1:
        out.add(6)
    return sorted(out)


def effective_orders(a: int, q: int, smooth_bound: int = DEFAULT_SMOOTH_BOUND,
                     effort: Effort = DEFAULT_EFFORT) -> tuple[list[int], OrderFact | None]:
    """Possible values of o*, the least e >= 1 with q | repunit(a, e), among
    those e for which the repunit can have two prime factors.

    o* is the order of a mod q, except that o* = q when q | a - 1.  An empty
    list means q divides no admissible repunit of base a.
    """
    if a % q == 0:
        return [], None
    if (a - 1) % q == 0:
        return ([q] if exponents_for_order(a, q) else []), None
    part = factor_q_minus_1(q, smooth_bound, effort)
    if part.complete:
        o = exact_order(a, q, part.primes)
        return ([o] if exponents_for_order(a, o) else []), OrderFact.exact(a, q, o, part.primes)
    fact = multiple_fact(a, q, smooth_bound, effort)
    cands = set()
    # any admissible order is r, r^2 or 6; test the ones built from known primes
    for r in part.primes:
        for d in (r, r * r):
            if (q - 1) % d == 0 and pow(a, d, q) == 1 and _minimal(a, q, d):
                cands.add(d)
    if a == 2 and pow(2, 6, q) == 1 and _minimal(2, q, 6):
        cands.add(6)
    # an order r or r^2 with r in the unsplit cofactor would divide it
    if pow(a, part.cofactor, q) == 1:
        raise UnresolvedOrder(a, q, "order divides the unfactored part of q - 1")
    return sorted(cands), fact

"""Matveev's lower bound for linear forms in logarithms and the explicit bound
chain for sigma(2^a), sigma(3^b), sigma(5^c) sharing two primes p, q.

Every quantity is carried as a RealInterval and every published bound is the
upper end of an enclosure, rounded up.  Searches for fixed points use floats;
the resulting numbers are then certified with interval arithmetic, so the float
step can only cost tightness, never soundness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .mparith import DOWN, UP, FixedReal, RealInterval, format_sci, ln_interval

SCALE = 40

Number = int | Fraction | RealInterval


class NonConvergence(ArithmeticError):
    pass


def iv(x: Number, scale: int = SCALE) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return RealInterval.point(Fraction(x), scale)


def ln(x: Number, prec: int = SCALE) -> RealInterval:
    if isinstance(x, RealInterval):
        return x.ln(prec)
    return ln_interval(x, prec)


def _e_interval(prec: int) -> RealInterval:
    # sum 1/k!, tail after term k bounded by 2/(k+1)!
    unit = 10 ** (prec + 10)
    term, total, k = unit, 0, 0
    while term:
        total += term
        k += 1
        term //= k
    return RealInterval.from_bounds(Fraction(total, unit), Fraction(total + 2 * k + 2, unit), prec)


E = _e_interval(SCALE)
LN2, LN3, LN5 = ln(2), ln(3), ln(5)
LOGS = {2: LN2, 3: LN3, 5: LN5}
C0 = 1 + ln(Fraction(3, 2))


def round_up_sig(x: Fraction, digits: int) -> Fraction:
    """Smallest number with ``digits`` significant digits that is >= x (x > 0)."""
    from .mparith import _floor_log10

    q = Fraction(10) ** (_floor_log10(x) - digits + 1)
    return math.ceil(x / q) * q


def round_up_places(x: Fraction, places: int) -> Fraction:
    q = Fraction(1, 10**places)
    return math.ceil(x / q) * q


def up(x: RealInterval) -> FixedReal:
    return x.hi


def up_fraction(x: RealInterval) -> Fraction:
    return x.hi.to_fraction()


# -- Matveev ------------------------------------------------------------------

def matveev_c1_interval(n: int) -> RealInterval:
    if n < 2:
        raise ValueError("matveev_c1 needs n >= 2")
    exact = Fraction(16, math.factorial(n)) * (2 * n + 3) * (n + 2) * (4 * (n + 1)) ** (n + 1)
    exact *= Fraction(n, 2)
    en = iv(1)
    for _ in range(n + 1):
        en = en * E
    tail = iv(Fraction(44, 10) * n + 7) + iv(Fraction(55, 10)) * ln(n)
    return en * exact * tail


def matveev_c1(n: int) -> FixedReal:
    """C_1(n) = 16/n! e^n (2n+3)(n+2)(4(n+1))^(n+1) (e n/2)(4.4n + 5.5 log n + 7),
    rounded up."""
    return up(matveev_c1_interval(n))


def matveev_constant(n: int) -> RealInterval:
    """C(n) = C_1(n) max{1, n/6}, the factor in front of (C_0 + log B) Omega."""
    return matveev_c1_interval(n) * max(Fraction(1), Fraction(n, 6))


@dataclass(frozen=True)
class LinearFormSpec:
    """b_1 log a_1 + ... + b_n log a_n with Matveev's height data A_j and B."""

    a: tuple[Fraction, ...]
    b: tuple[int, ...]
    A: tuple[RealInterval, ...]
    B: RealInterval

    def __post_init__(self) -> None:
        if not (len(self.a) == len(self.b) == len(self.A)) or len(self.a) < 1:
            raise ValueError("a, b and A must have the same positive length")
        for aj, Aj in zip(self.a, self.A):
            if Aj.lo < Fraction(16, 100):
                raise ValueError("A_j must be at least 0.16")
            if aj > 1 and Aj.hi < ln(aj).lo:
                raise ValueError("A_j must be at least log a_j")
        if self.B.lo < 1:
            raise ValueError("B must be at least 1")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def omega(self) -> RealInterval:
        out = iv(1)
        for Aj in self.A:
            out = out * Aj
        return out

    @classmethod
    def from_coefficients(cls, a: Sequence[int | Fraction], b: Sequence[int],
                          A: Sequence[RealInterval] | None = None) -> LinearFormSpec:
        """Fill in A_j = max{0.16, log a_j} and the smallest admissible B."""
        a = tuple(Fraction(x) for x in a)
        if A is None:
            A = tuple(ln(x).max(Fraction(16, 100)) if x > 1 else iv(Fraction(16, 100)) for x in a)
        cands = [iv(1)] + [iv(abs(bj)) * Aj / A[-1] for bj, Aj in zip(b[:-1], A[:-1])] + [iv(abs(b[-1]))]
        B = cands[0]
        for c in cands[1:]:
            B = B.max(c)
        return cls(a, tuple(b), tuple(A), B)


def matveev_lower_interval(form: LinearFormSpec) -> RealInterval:
    return -(matveev_constant(form.n) * (C0 + form.B.ln(SCALE)) * form.omega)


def matveev_lower(form: LinearFormSpec) -> FixedReal:
    """Lower bound for log|Lambda|, rounded down."""
    return matveev_lower_interval(form).lo


# -- self-referential bounds --------------------------------------------------------

def _float(x: Number) -> float:
    return float(x.hi.to_fraction()) if isinstance(x, RealInterval) else float(x)


def solve_self_bound(A: Number, B: Number, slack: Fraction = Fraction(1, 1000)) -> FixedReal:
    """Upper bound X for every x > 0 with x <= A + B log x.

    Returns X with X > A + B log X certified, X >= B (where x - B log x is
    increasing) and X / (1 + slack) not above the largest root.
    """
    Ai, Bi = iv(A), iv(B)
    if Bi.lo <= 0 or Ai.lo < 0:
        raise ValueError("need A >= 0 and B > 0")
    fa, fb = _float(Ai), _float(Bi)

    def g(x: float) -> float:
        return x - fa - fb * math.log(x)

    lo = max(fb, 1e-300)
    if g(lo) > 0:
        raise NonConvergence("no x satisfies x <= A + B log x")
    hi = max(2 * lo, 2 * fa + 1)
    while g(hi) <= 0:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if g(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return certify_above_root(lambda x: Ai + Bi * ln(x), Fraction(hi), slack, floor=Bi.hi.to_fraction())


def certify_above_root(f: Callable[[Fraction], RealInterval], guess: Fraction,
                       slack: Fraction = Fraction(1, 1000), floor: Fraction = Fraction(0),
                       digits: int = 10) -> FixedReal:
    """Nudge ``guess`` upward until f(X) < X is certified; X is returned with
    ``digits`` significant digits, rounded up."""
    X = max(round_up_sig(guess, digits), floor)
    for _ in range(60):
        if X > 0 and f(X).hi.to_fraction() < X:
            return FixedReal.from_rational(X, SCALE, UP)
        X *= 1 + Fraction(1, 10**6)
        X = round_up_sig(X, digits)
    raise NonConvergence("could not certify an upper bound near the float root")


def largest_fixed_point(f: Callable[[Fraction], RealInterval], start: float,
                        ffloat: Callable[[float], float]) -> FixedReal:
    """X with f(X) < X certified, where f grows sublinearly from ``start`` on
    (so every L <= f(L) satisfies L <= X)."""
    lo, hi = start, start
    while ffloat(hi) >= hi:
        hi *= 2
    if ffloat(lo) < lo:
        raise NonConvergence("start point already above the fixed point")
    for _ in range(200):
        mid = (lo + hi) / 2
        if ffloat(mid) >= mid:
            lo = mid
        else:
            hi = mid
    return certify_above_root(f, Fraction(hi))


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class BoundCertificate:
    name: str
    value: FixedReal
    derivation: tuple[str, ...] = ()
    exact: Fraction | None = field(default=None, compare=False)

    @property
    def fraction(self) -> Fraction:
        return self.value.to_fraction()

    def __float__(self) -> float:
        return float(self.value.to_fraction())

    def to_dict(self) -> dict:
        out = {"name": self.name, "value": format_sci(self.value.to_fraction(), 6),
               "value_exact": str(self.value.to_fraction()), "derivation": list(self.derivation)}
        if self.exact is not None:
            out["unrounded"] = format_sci(self.exact, 8)
        return out


def _cert(name: str, x: Fraction, steps: Sequence[str], exact: Fraction | None = None) -> BoundCertificate:
    return BoundCertificate(name, FixedReal.from_rational(x, SCALE, UP), tuple(steps), exact)


@dataclass(frozen=True)
class HVector:
    h: tuple[int, int, int]

    @classmethod
    def from_exponents(cls, f: Sequence[int], g: Sequence[int]) -> HVector:
        f1, f2, f3 = f
        g1, g2, g3 = g
        return cls((f2 * g3 - f3 * g2, f3 * g1 - f1 * g3, f1 * g2 - f2 * g1))

    @property
    def H(self) -> int:
        return max(abs(x) for x in self.h)


# -- constants C_1..C_6 ----------------------------------------------------------

THRESHOLD = 10**10
# the three linear forms: n and the log a_j that join log p, log q in Omega
_FORMS = {1: (3, (2,)), 2: (4, (2, 3)), 3: (4, (2, 5))}


@dataclass(frozen=True)
class Lemma31Case:
    i: int
    K_coef: Fraction           # bound Y < K_coef log p log Y, unrounded upper end
    K_rounded: Fraction        # 4 significant digits, up
    amplification: Fraction    # y*/(K log K) at the smallest K
    C_main: Fraction           # C_i
    C_shift: Fraction          # C_{i+3}
    steps: tuple[str, ...]


def _fixed_point_klogy(K: float) -> float:
    # largest root of y = K log y, iterating downward from above
    y = K * math.log(K) * 2
    for _ in range(200):
        y = K * math.log(y)
    return y


def lemma31_case(i: int) -> Lemma31Case:
    n, extra = _FORMS[i]
    omega_part = iv(1)
    for a in extra:
        omega_part = omega_part * LOGS[a]
    # Y = e_i log a_i / log q > 10^10, so C_0 + log Y < log Y (1 + C_0 / log 10^10);
    # the lower bound -log|Lambda_i| > (1 - 10^-10) e_i log a_i contributes 1/(1 - 10^-10)
    factor = (1 + C0 / ln(THRESHOLD)) * Fraction(THRESHOLD, THRESHOLD - 1)
    K = matveev_constant(n) * omega_part * factor
    K_hi = up_fraction(K)
    K_r = round_up_sig(K_hi, 4)
    shift = round_up_places(up_fraction(ln(K_r)), 1)
    # Y < K' log Y with K' = K_r log p >= K_r log 2; y*(K')/(K' log K') is
    # largest at the smallest K'
    Kmin = float(K_r) * math.log(2)
    ystar = _fixed_point_klogy(Kmin)
    rho = Fraction(ystar / (Kmin * math.log(Kmin))) * (1 + Fraction(1, 10**9))
    rho = round_up_sig(rho, 4)
    # certify: K' rho log K' > y*, i.e. y = rho K' log K' satisfies y > K' log y
    Kp = iv(K_r) * LN2
    y = iv(rho) * Kp * ln(Kp)
    if not (Kp * ln(y)).certainly_lt(y):
        raise NonConvergence(f"amplification {rho} does not certify for i={i}")
    main = round_up_sig(rho * K_r, 4)
    steps = (
        f"C(n)=C_1({n}) max(1,{n}/6)",
        f"K'=(1+C_0/log 1e10)/(1-1e-10) C({n}) prod log a_j = {format_sci(K_hi, 8)} -> {format_sci(K_r, 4)}",
        f"rho = y*/(K log K) at K = {format_sci(K_r, 4)} log 2: {rho}",
        f"C_{i} = rho K' -> {format_sci(main, 4)}",
        f"C_{i + 3} = log K' -> {float(shift)}",
        "below threshold: e_i log a_i <= 1e10 log q, dominated by the same expression",
    )
    return Lemma31Case(i, K_hi, K_r, rho, main, shift, steps)


@dataclass(frozen=True)
class Lemma31Constants:
    C: dict[int, Fraction]
    cases: tuple[Lemma31Case, ...]

    def __getitem__(self, k: int) -> Fraction:
        return self.C[k]


_CONSTANTS: Lemma31Constants | None = None


def lemma31_constants() -> Lemma31Constants:
    global _CONSTANTS
    if _CONSTANTS is None:
        cases = tuple(lemma31_case(i) for i in (1, 2, 3))
        C = {c.i: c.C_main for c in cases}
        C.update({c.i + 3: c.C_shift for c in cases})
        _CONSTANTS = Lemma31Constants(C, cases)
    return _CONSTANTS


def lemma31_E(i: int, log_p: Number, log_q: Number, consts: Lemma31Constants | None = None) -> FixedReal:
    """E_i = C_i log p log q (log log p + C_{i+3}), the bound on e_i log a_i."""
    C = (consts or lemma31_constants()).C
    lp, lq = iv(log_p), iv(log_q)
    val = iv(C[i]) * lp * lq * (ln(lp) + C[i + 3])
    return up(val)


def lambda_small_bound_holds(a: int, e: int) -> bool:
    """-log(1 - a^-e) < 1/(a^e - 1), checked with certified logs."""
    lhs = -ln(1 - Fraction(1, a**e), 30 + 2 * e)
    return lhs.certainly_lt(Fraction(1, a**e - 1))


# -- the x-smallest linear form ------------------------------------------------------

K3 = matveev_constant(3) * LN2 * LN3 * LN5
K4 = matveev_constant(4) * LN2 * LN3 * LN5


def lemma32_bound(H: Number, e1: Number) -> RealInterval:
    """log x <= log(7H/4) + C(3)(C_0 + log((e_1+3)H)) log 2 log 3 log 5."""
    Hi = iv(H)
    return (Hi * Fraction(7, 4)).ln(SCALE) + K3 * (C0 + ((iv(e1) + 3) * Hi).ln(SCALE))


def lemma32_form(e: Sequence[int], h: Sequence[int]) -> LinearFormSpec:
    e1, e2, e3 = e
    h1, h2, h3 = h
    b = (e1 * h1 - h2 - 2 * h3, e2 * h2, e3 * h3)
    return LinearFormSpec.from_coefficients((2, 3, 5), b)


# -- global bounds ---------------------------------------------------------------

def _fl() -> dict[str, float]:
    C = lemma31_constants().C
    return {"C1": float(C[1]), "C2": float(C[2]), "C3": float(C[3]), "C4": float(C[4]),
            "C5": float(C[5]), "C6": float(C[6]), "K3": _float(K3), "K4": _float(K4),
            "C0": _float(C0)}


def _H_of(L: RealInterval, C) -> RealInterval:
    # H <= C_2 C_3 L^2 (log L + C_5)(log L + C_6), both log p and log q <= L
    lL = ln(L)
    return iv(C[2] * C[3]) * L * L * (lL + C[5]) * (lL + C[6])


def _e1_of(L: RealInterval, C) -> RealInterval:
    lL = ln(L)
    return iv(C[1]) * L * L * (lL + C[4]) / LN2


def _e3_of(L: RealInterval, C) -> RealInterval:
    lL = ln(L)
    return iv(C[3]) * L * L * (lL + C[6]) / LN5


def _G(L: RealInterval, C, strict: bool = False) -> RealInterval:
    e = _e1_of(L, C)
    if strict:
        # B <= max(e_1 + 3, e_2, e_3) H; e_3 dominates e_2 here
        e = e.max(_e3_of(L, C) - 3)
    return lemma32_bound(_H_of(L, C), e)


def _G_float(L: float, c: dict[str, float], strict: bool = False) -> float:
    lL = math.log(L)
    H = c["C2"] * c["C3"] * L * L * (lL + c["C5"]) * (lL + c["C6"])
    e1 = c["C1"] * L * L * (lL + c["C4"]) / math.log(2)
    if strict:
        e1 = max(e1, c["C3"] * L * L * (lL + c["C6"]) / math.log(5) - 3)
    return math.log(7 * H / 4) + c["K3"] * (c["C0"] + math.log((e1 + 3) * H))


def _case_nodiv(L: RealInterval, C, strict: bool = False) -> RealInterval:
    X = _G(L, C, strict)
    H = _H_of(L, C)
    E3 = iv(C[3]) * X * L * (ln(X) + C[6])
    return (H * Fraction(3, 2)).ln(SCALE) + K4 * (C0 + (E3 * H / X).ln(SCALE)) * X


def _case_nodiv_float(L: float, c: dict[str, float], strict: bool = False) -> float:
    X = _G_float(L, c, strict)
    lL = math.log(L)
    H = c["C2"] * c["C3"] * L * L * (lL + c["C5"]) * (lL + c["C6"])
    E3 = c["C3"] * X * L * (math.log(X) + c["C6"])
    return math.log(1.5 * H) + c["K4"] * (c["C0"] + math.log(E3 * H / X)) * X


@dataclass(frozen=True)
class GlobalBounds:
    certificates: dict[str, BoundCertificate]
    log_p: Fraction
    log_q: Fraction
    e: dict[int, Fraction]
    H: Fraction

    def __getitem__(self, name: str) -> BoundCertificate:
        return self.certificates[name]

    def as_list(self) -> list[BoundCertificate]:
        return [self.certificates[k] for k in ("log p", "log q", "e_1", "e_2", "e_3", "H")]


_GLOBAL: dict[bool, GlobalBounds] = {}


def lemma33_global(consts: Lemma31Constants | None = None, strict: bool = False) -> GlobalBounds:
    """Both cases of the global bound (q | x and q not dividing x) and the
    resulting bounds on log p, log q, e_1, e_2, e_3 and H.  Unless x = p = 31.

    By default the height of the three-term form is taken as (e_1 + 3)H.
    ``strict=True`` uses max(e_1 + 3, e_2, e_3)H instead, which bounds every
    coefficient without assuming e_1 is the largest exponent.
    """
    if consts is None and strict in _GLOBAL:
        return _GLOBAL[strict]
    cs = consts or lemma31_constants()
    C = cs.C
    c = {"C1": float(C[1]), "C2": float(C[2]), "C3": float(C[3]), "C4": float(C[4]),
         "C5": float(C[5]), "C6": float(C[6]), "K3": _float(K3), "K4": _float(K4), "C0": _float(C0)}
    steps_common = [f"C_{k}={format_sci(C[k], 4)}" for k in range(1, 7)]
    steps_common.append("height of the three-term form: " +
                        ("max(e_1+3, e_2, e_3) H" if strict else "(e_1+3) H"))

    # q | x: log p < log q <= log x <= G(log q)
    L_div = largest_fixed_point(lambda L: _G(iv(L), C, strict), 10.0,
                                lambda L: _G_float(L, c, strict))
    L_div_r = round_up_sig(L_div.to_fraction(), 3)

    # q does not divide x: log q <= F(G(log q), log q), then log p <= G(log q)
    L_nd = largest_fixed_point(lambda L: _case_nodiv(iv(L), C, strict), 10.0,
                               lambda L: _case_nodiv_float(L, c, strict))
    L_nd_r = round_up_sig(L_nd.to_fraction(), 3)
    X_nd = up_fraction(_G(iv(L_nd_r), C, strict))
    X_nd_r = round_up_sig(X_nd, 3)

    log_p = max(L_div_r, X_nd_r)
    log_q = max(L_div_r, L_nd_r)
    P, Q = iv(log_p), iv(log_q)
    lQ = ln(Q)
    # E_i is symmetric in p, q up to log log; use the larger log log q
    e = {}
    for i, a in ((1, 2), (2, 3), (3, 5)):
        val = up_fraction(iv(C[i]) * P * Q * (lQ + C[i + 3]) / LOGS[a])
        e[i] = round_up_sig(val, 4)
    H_val = up_fraction(iv(C[2] * C[3]) * P * Q * (ln(P) + C[6]) * (lQ + C[5]))
    H = round_up_sig(H_val, 4)

    certs = {
        "log p": _cert("log p", log_p, steps_common + [
            f"q|x: fixed point of L = log(7H/4) + C(3)(C_0+log((e_1+3)H)) log2 log3 log5 -> {format_sci(L_div.to_fraction(), 6)}",
            f"q!|x: log p <= G(log q) = {format_sci(X_nd, 6)}",
            "worse case, 3 significant digits, rounded up"], max(L_div.to_fraction(), X_nd)),
        "log q": _cert("log q", log_q, steps_common + [
            f"q!|x: fixed point of log q <= log(3H/2) + C(4)(C_0+log(E_3 H/log x)) log2 log3 log5 log x -> {format_sci(L_nd.to_fraction(), 6)}",
            "worse case, 3 significant digits, rounded up"], L_nd.to_fraction()),
        "H": _cert("H", H, [f"H < C_2 C_3 log p log q (loglog p + C_6)(loglog q + C_5) = {format_sci(H_val, 8)}"], H_val),
        "log q (q|x)": _cert("log q (q|x)", L_div_r, ["q|x case"], L_div.to_fraction()),
    }
    for i in (1, 2, 3):
        certs[f"e_{i}"] = _cert(f"e_{i}", e[i], [f"e_{i} < C_{i} log p log q (loglog q + C_{i + 3}) / log a_{i}"])
    out = GlobalBounds(certs, log_p, log_q, e, H)
    if consts is None:
        _GLOBAL[strict] = out
    return out

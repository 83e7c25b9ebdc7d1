"""Exact integral LLL, certified shortest-vector lower bounds, and the
reduction step that turns a huge coefficient bound into a small bound on
log x for the form b_1 log 2 + b_2 log 3 + b_3 log 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .baker import (
    LN2,
    LN3,
    LN5,
    LOGS,
    K4,
    C0,
    GlobalBounds,
    iv,
    lemma31_constants,
    lemma33_global,
    ln,
    round_up_places,
    round_up_sig,
    up_fraction,
)
from .mparith import UP, FixedReal, RealInterval, floor_scaled, format_sci, ln_interval

DELTA = Fraction(3, 4)


class SingularBasis(ValueError):
    pass


class CriterionFailed(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntLattice:
    """Lattice generated by the columns of an n x n integer matrix, stored as
    a tuple of column vectors."""

    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.columns)
        if n == 0 or any(len(c) != n for c in self.columns):
            raise ValueError("basis must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntLattice:
        n = len(rows)
        return cls(tuple(tuple(int(rows[i][j]) for i in range(n)) for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.columns)

    def rows(self) -> list[list[int]]:
        return [[self.columns[j][i] for j in range(self.n)] for i in range(self.n)]

    def determinant(self) -> int:
        return _det([list(c) for c in self.columns])

    def to_dict(self) -> dict:
        return {"columns": [[str(x) for x in c] for c in self.columns]}


def _det(m: list[list[int]]) -> int:
    """Bareiss fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


# -- integral LLL ------------------------------------------------------------------

def lll(basis: IntLattice, delta: Fraction = DELTA) -> IntLattice:
    """LLL with exact integer Gram-Schmidt data (d_i, lambda_ij)."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1]")
    dp, dq = delta.numerator, delta.denominator
    n = basis.n
    b = [None] + [list(c) for c in basis.columns]            # 1-based
    d = [0] * (n + 1)
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[0] = 1
    d[1] = _dot(b[1], b[1])
    if d[1] == 0:
        raise SingularBasis("zero vector in basis")
    k, kmax = 2, 1

    def redi(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lm * t) // d[k - 1]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k]
        d[k - 1] = B

    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k], b[j])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise SingularBasis("basis vectors are linearly dependent")
                    d[k] = u
        redi(k, k - 1)
        if dq * d[k] * d[k - 2] < dp * d[k - 1] ** 2 - dq * lam[k][k - 1] ** 2:
            swapi(k)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                redi(k, l)
            k += 1
    return IntLattice(tuple(tuple(v) for v in b[1:]))


def gram_schmidt(basis: IntLattice) -> tuple[list[list[Fraction]], list[Fraction]]:
    """(mu, B) with B_i = |b_i*|^2, exact."""
    n = basis.n
    bs: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    B: list[Fraction] = []
    for i, v in enumerate(basis.columns):
        w = [Fraction(x) for x in v]
        for j in range(i):
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(v, bs[j])) / B[j]
            w = [wi - mu[i][j] * yj for wi, yj in zip(w, bs[j])]
        bs.append(w)
        B.append(sum(x * x for x in w))
    return mu, B


def is_reduced(basis: IntLattice, delta: Fraction = DELTA) -> bool:
    mu, B = gram_schmidt(basis)
    n = basis.n
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    return all(B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1] for k in range(1, n))


def unimodular_transform(before: IntLattice, after: IntLattice) -> list[list[int]] | None:
    """U with after = before * U (columns), if it is integral with det +-1."""
    n = before.n
    # solve before * U = after column by column with exact Gaussian elimination
    A = [[Fraction(before.columns[j][i]) for j in range(n)] for i in range(n)]
    rhs = [[Fraction(after.columns[j][i]) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        rhs[c], rhs[piv] = rhs[piv], rhs[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        rhs[c] = [x * inv for x in rhs[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
                rhs[r] = [x - f * y for x, y in zip(rhs[r], rhs[c])]
    if any(x.denominator != 1 for row in rhs for x in row):
        return None
    U = [[int(x) for x in row] for row in rhs]
    return U if abs(_det(U)) == 1 else None


# -- shortest vector bounds ------------------------------------------------------------

def shortest_vector_sq(basis: IntLattice) -> int:
    """Exact lambda_1^2 by Fincke-Pohst enumeration over the given basis."""
    n = basis.n
    mu, B = gram_schmidt(basis)
    best = min(_dot(c, c) for c in basis.columns)
    x = [0] * n

    def walk(level: int, partial: Fraction) -> None:
        nonlocal best
        if level < 0:
            if any(x):
                v = [sum(x[j] * basis.columns[j][i] for j in range(n)) for i in range(n)]
                best = min(best, _dot(v, v))
            return
        c = -sum(mu[j][level] * x[j] for j in range(level + 1, n))
        room = (best - partial) / B[level]
        centre = math.floor(c + Fraction(1, 2))
        for sign in (1, -1):
            t = centre if sign == 1 else centre - 1
            while (t - c) ** 2 <= room:
                x[level] = t
                walk(level - 1, partial + (t - c) ** 2 * B[level])
                room = (best - partial) / B[level]
                t += sign
        x[level] = 0

    walk(n - 1, Fraction(0))
    return best


LLL_BOUND = "lll"
GS_BOUND = "gram_schmidt"
EXACT = "exact"


def shortest_lower_bound_sq(reduced: IntLattice, method: str = LLL_BOUND, delta: Fraction = DELTA) -> Fraction:
    """Certified lower bound on lambda_1^2.

    ``lll``: |b_1|^2 (delta - 1/4)^(n-1), valid for a delta-reduced basis;
    ``gram_schmidt``: min |b_i*|^2, valid for any basis;
    ``exact``: lambda_1^2 itself by enumeration.
    """
    if method == LLL_BOUND:
        return _dot(reduced.columns[0], reduced.columns[0]) * (Fraction(delta) - Fraction(1, 4)) ** (reduced.n - 1)
    if method == GS_BOUND:
        return min(gram_schmidt(reduced)[1])
    if method == EXACT:
        return Fraction(shortest_vector_sq(reduced))
    raise ValueError(f"unknown method {method!r}")


def _sqrt_down(x: Fraction, scale: int = 6) -> FixedReal:
    unit = 10**scale
    r = math.isqrt(x.numerator * unit * unit // x.denominator)
    return FixedReal(r, scale)


def shortest_lower_bound(reduced: IntLattice, method: str = LLL_BOUND) -> FixedReal:
    return _sqrt_down(shortest_lower_bound_sq(reduced, method))


# -- the lattice for b_1 log 2 + b_2 log 3 + b_3 log 5 ------------------------------------------

DEFAULT_PRECISION = {370: 450, 157: 200, 111: 150}
RECHECK_EXTRA = 50


def build_lattice(C: int, gamma: int, logs: Sequence[RealInterval]) -> IntLattice:
    """Rows (gamma, 0, 0), (0, gamma, 0), (floor(C gamma log a_i))."""
    third = [floor_scaled(L, C * gamma) for L in logs]
    return IntLattice.from_rows([[gamma, 0, 0], [0, gamma, 0], third])


def lattice_at_precision(C: int, gamma: int, prec: int, bases=(2, 3, 5)) -> IntLattice:
    return build_lattice(C, gamma, [ln_interval(a, prec) for a in bases])


def default_precision(C: int) -> int:
    digits = len(str(C)) - 1
    return DEFAULT_PRECISION.get(digits, digits + 80)


def criterion_factor(gamma: int) -> int:
    """K with: l(Gamma)^2 > K X_1^2 and all |b_i| <= X_1 force |Lambda| > X_1/(C gamma).

    If |Lambda| <= X_1/(C gamma) the lattice point for (b_1, b_2, b_3) has
    coordinates gamma b_1, gamma b_2 and C gamma Lambda plus a rounding error
    below |b_1| + |b_2| + |b_3|, so its squared length is at most
    (2 gamma^2 + 16) X_1^2.  At gamma = 2 this is the familiar 16 + 4 gamma = 24.
    """
    return max(16 + 4 * gamma, 16 + 2 * gamma * gamma)


@dataclass(frozen=True)
class ReductionOutcome:
    case: str
    C: int
    gamma: int
    X1: Fraction
    H: Fraction
    precision: int
    basis: IntLattice
    reduced: IntLattice
    l_lower_sq: Fraction
    method: str
    lambda_lower: Fraction          # |Lambda| > X_1/(C gamma)
    new_bound: FixedReal            # log x < this
    attempts: int = 1
    derivation: tuple[str, ...] = ()

    @property
    def bound(self) -> Fraction:
        return self.new_bound.to_fraction()

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "C": f"10^{len(str(self.C)) - 1}" if str(self.C).rstrip("0") == "1" else str(self.C),
            "gamma": self.gamma,
            "X1": format_sci(self.X1, 4),
            "H": format_sci(self.H, 4),
            "precision_digits": self.precision,
            "l_lower_squared": format_sci(self.l_lower_sq, 8),
            "l_lower_method": self.method,
            "criterion": f"l^2 > {criterion_factor(self.gamma)} X1^2",
            "lambda_lower": format_sci(self.lambda_lower, 4),
            "new_bound": str(float(self.bound)),
            "new_bound_exact": str(self.bound),
            "attempts": self.attempts,
            "derivation": list(self.derivation),
            "reduced_basis": self.reduced.to_dict(),
        }


def certify_criterion(reduced: IntLattice, X1: Fraction, gamma: int,
                      delta: Fraction = DELTA) -> tuple[Fraction, str] | None:
    """Cheapest certified lower bound on l(Gamma)^2 that clears the criterion."""
    need = criterion_factor(gamma) * X1 * X1
    best = None
    for method in (LLL_BOUND, GS_BOUND, EXACT):
        val = shortest_lower_bound_sq(reduced, method, delta)
        if best is None or val > best[0]:
            best = (val, method)
        if val > need:
            return val, method
    return None


def reduced_lattice(C: int, gamma: int, prec: int | None = None,
                    delta: Fraction = DELTA) -> tuple[IntLattice, IntLattice, int]:
    prec = prec or default_precision(C)
    M = lattice_at_precision(C, gamma, prec)
    check = lattice_at_precision(C, gamma, prec + RECHECK_EXTRA)
    if M != check:
        raise ArithmeticError("lattice entries changed with precision")
    return M, lll(M, delta), prec


def deweger_step(X1: Fraction, C: int, gamma: int, H: Fraction, case: str = "",
                 prec: int | None = None, retries: int = 3, derivation: Sequence[str] = (),
                 delta: Fraction = DELTA) -> ReductionOutcome:
    """Reduce, certify l(Gamma)^2 > K X_1^2, and return
    log x < log(7H/4) - log(X_1 / (C gamma))."""
    X1, H = Fraction(X1), Fraction(H)
    attempts = 0
    while True:
        attempts += 1
        M, red, used = reduced_lattice(C, gamma, prec if attempts == 1 else None, delta)
        got = certify_criterion(red, X1, gamma, delta)
        if got is not None:
            break
        if attempts > retries:
            raise CriterionFailed(f"criterion fails up to C = {C}")
        C *= 10**5
    lsq, method = got
    lam = X1 / (C * gamma)
    bound = ln(H * Fraction(7, 4)) - ln(lam)
    new = round_up_places(up_fraction(bound), 2)
    steps = list(derivation) + [
        f"C = 10^{len(str(C)) - 1}, gamma = {gamma}, {used}-digit logarithms (floors rechecked at +{RECHECK_EXTRA})",
        f"l(Gamma)^2 >= {format_sci(lsq, 6)} ({method}) > {criterion_factor(gamma)} X1^2 = {format_sci(criterion_factor(gamma) * X1 * X1, 6)}",
        f"|Lambda| > X1/(C gamma) = {format_sci(lam, 4)}",
        f"log x < log(7H/4) - log|Lambda| = {format_sci(up_fraction(bound), 8)} -> {float(new)}",
    ]
    return ReductionOutcome(case, C, gamma, X1, H, used, M, red, lsq, method, lam,
                            FixedReal.from_rational(new, 2, UP), attempts, tuple(steps))


# -- coefficient bounds ----------------------------------------------------------------

FIRST = "first_pass"
NODIV = "q_not_div_x"
DIV = "q_div_x"
CASES = (FIRST, NODIV, DIV)
CASE_ALIASES = {"first": FIRST, "nodiv": NODIV, "div": DIV, FIRST: FIRST, NODIV: NODIV, DIV: DIV}
CASE_C = {FIRST: 10**370, NODIV: 10**157, DIV: 10**111}


@dataclass(frozen=True)
class CoefficientBound:
    case: str
    X1: Fraction
    H: Fraction
    parts: dict[str, Fraction] = field(default_factory=dict)
    derivation: tuple[str, ...] = ()


def exponent_caps(log_x: Fraction) -> dict[int, int]:
    """x = (a^e - 1)/(a - 1) >= a^(e-1), so e <= 1 + log x / log a."""
    return {a: math.floor(1 + (iv(log_x) / L).hi.to_fraction()) for a, L in LOGS.items()}


def coefficient_bounds(case: str, glob: GlobalBounds | None = None,
                       first_bound: Fraction | None = None) -> CoefficientBound:
    """X_1 bounding every |b_j| of the form, and the H entering log(7H/4)."""
    case = CASE_ALIASES[case]
    glob = glob or lemma33_global()
    C = lemma31_constants().C
    if case == FIRST:
        emax = max(glob.e[1] + 3, glob.e[2], glob.e[3])
        X1 = round_up_sig(glob.H * emax, 4)
        return CoefficientBound(case, X1, glob.H, {"H": glob.H, "max e": emax},
                                (f"X1 = H max(e_1+3, e_2, e_3) = {format_sci(glob.H * emax, 6)} -> {format_sci(X1, 4)}",))
    if first_bound is None:
        raise ValueError("later passes need the first-pass bound on log x")
    X = iv(first_bound)
    lX = ln(X)
    caps = exponent_caps(first_bound)
    steps = [f"log x < {float(first_bound)}, e_i <= {caps}"]
    if case == NODIV:
        E3 = iv(glob.e[3]) * LN5
        Hg = iv(glob.H)
        logq = (Hg * Fraction(3, 2)).ln() + K4 * (C0 + (E3 * Hg / X).ln()) * X
        Lq = round_up_sig(up_fraction(logq), 4)
        steps.append(f"log q <= log(3H/2) + C(4)(C_0 + log(E_3 H/log x)) log2 log3 log5 log x "
                     f"= {format_sci(up_fraction(logq), 6)} -> {format_sci(Lq, 4)}")
        Q = iv(Lq)
        lQ = ln(Q)
        hi = iv(C[2] * C[3]) * X * Q * (lX + C[6]) * (lQ + C[5])
        hj = iv(C[3]) * X * (lQ + C[6])
        ej = iv(C[3]) * X * Q * (lQ + C[6]) / LN2
        parts = {"log q": Lq}
    else:
        hi = iv(C[2] * C[3]) * X * X * (lX + C[5]) * (lX + C[6])
        hj = iv(C[3]) * X * (lX + C[6])
        ej = iv(C[3]) * X * X * (lX + C[6]) / LN2
        parts = {}
    Hi = round_up_sig(up_fraction(hi), 4)
    Hj = round_up_sig(up_fraction(hj), 4)
    Ej = round_up_sig(up_fraction(ej), 4)
    cap = max(caps.values())
    # coefficients: (e_1 h_1 - h_2 - 2 h_3, e_2 h_2, e_3 h_3); index i is the base of x
    cands = [cap * Hi + 3 * Hj, Ej * Hj + 2 * Hi + Hj, Ej * Hj]
    X1 = round_up_sig(max(cands), 4)
    parts.update({"|h_i|": Hi, "|h_j|": Hj, "|e_j|": Ej})
    steps += [f"|h_i| < {format_sci(Hi, 4)}", f"|h_j| < {format_sci(Hj, 4)}", f"|e_j| < {format_sci(Ej, 4)}",
              f"X1 = max({cap}|h_i| + 3|h_j|, |e_j||h_j| + 2|h_i| + |h_j|) -> {format_sci(X1, 4)}"]
    return CoefficientBound(case, X1, max(Hi, Hj), parts, tuple(steps))


@dataclass(frozen=True)
class ReductionChain:
    first: ReductionOutcome
    nodiv: ReductionOutcome
    div: ReductionOutcome
    caps: dict[int, int]

    @property
    def prime_power_bound(self) -> Fraction:
        return max(self.nodiv.bound, self.div.bound)

    @property
    def two_prime_bound(self) -> Fraction:
        return self.div.bound

    def outcomes(self) -> list[ReductionOutcome]:
        return [self.first, self.nodiv, self.div]


def run_case(case: str, glob: GlobalBounds | None = None, first_bound: Fraction | None = None,
             C: int | None = None, gamma: int = 2, prec: int | None = None,
             delta: Fraction = DELTA) -> ReductionOutcome:
    case = CASE_ALIASES[case]
    cb = coefficient_bounds(case, glob, first_bound)
    return deweger_step(cb.X1, C or CASE_C[case], gamma, cb.H, case, prec, derivation=cb.derivation, delta=delta)


_CHAIN: ReductionChain | None = None


def reduction_chain(gamma: int = 2, C: dict[str, int] | None = None, delta: Fraction = DELTA,
                    precision: int | None = None) -> ReductionChain:
    global _CHAIN
    default = gamma == 2 and not C and delta == DELTA and precision is None
    if _CHAIN is not None and default:
        return _CHAIN
    C = {**CASE_C, **{CASE_ALIASES[k]: v for k, v in (C or {}).items()}}
    kw = dict(gamma=gamma, delta=delta, prec=precision)
    first = run_case(FIRST, C=C[FIRST], **kw)
    fb = first.bound
    nodiv = run_case(NODIV, first_bound=fb, C=C[NODIV], **kw)
    div = run_case(DIV, first_bound=fb, C=C[DIV], **kw)
    chain = ReductionChain(first, nodiv, div, exponent_caps(fb))
    if default:
        _CHAIN = chain
    return chain

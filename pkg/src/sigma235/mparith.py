"""Fixed-point decimal reals with directed rounding, and certified logarithms.

Integers are plain Python ints throughout the package.  Reals are carried as a
``mantissa * 10**-scale`` pair that remembers which way it was rounded, and
pairs of those form closed intervals that are guaranteed to contain the true
value.  Only the operations the bound arithmetic needs are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

DOWN = "down"
UP = "up"


class AmbiguousFloor(ArithmeticError):
    """The enclosing interval straddles an integer after scaling."""


def _floor_div(n: int, d: int) -> int:
    return n // d


def _ceil_div(n: int, d: int) -> int:
    return -((-n) // d)


def _round_fraction(x: Fraction, scale: int, mode: str) -> int:
    n = x.numerator * 10**scale
    d = x.denominator
    return _floor_div(n, d) if mode == DOWN else _ceil_div(n, d)


@dataclass(frozen=True)
class FixedReal:
    """``mantissa * 10**-scale``, known to be rounded in direction ``mode``.

    A value built with ``mode="down"`` never exceeds the real it stands for;
    ``mode="up"`` never falls below it.
    """

    mantissa: int
    scale: int
    mode: str = DOWN

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if self.mode not in (DOWN, UP):
            raise ValueError(f"unknown rounding mode {self.mode!r}")

    @classmethod
    def from_rational(cls, x: Rational, scale: int, mode: str = DOWN) -> FixedReal:
        return cls(_round_fraction(Fraction(x), scale, mode), scale, mode)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.scale)

    def __float__(self) -> float:
        return self.mantissa / 10**self.scale if self.scale < 300 else float(self.to_fraction())

    def rescale(self, scale: int) -> FixedReal:
        """Round (in this value's own direction) to ``scale`` digits."""
        return FixedReal.from_rational(self.to_fraction(), scale, self.mode)

    def _combine(self, other: FixedReal | Rational, op) -> FixedReal:
        rhs = other.to_fraction() if isinstance(other, FixedReal) else Fraction(other)
        scale = max(self.scale, other.scale) if isinstance(other, FixedReal) else self.scale
        return FixedReal.from_rational(op(self.to_fraction(), rhs), scale, self.mode)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __neg__(self) -> FixedReal:
        return FixedReal(-self.mantissa, self.scale, UP if self.mode == DOWN else DOWN)

    def __lt__(self, other) -> bool:
        return self.to_fraction() < _as_fraction(other)

    def __le__(self, other) -> bool:
        return self.to_fraction() <= _as_fraction(other)

    def __gt__(self, other) -> bool:
        return self.to_fraction() > _as_fraction(other)

    def __ge__(self, other) -> bool:
        return self.to_fraction() >= _as_fraction(other)

    def __str__(self) -> str:
        return format_sci(self.to_fraction())


def _as_fraction(x) -> Fraction:
    if isinstance(x, FixedReal):
        return x.to_fraction()
    if isinstance(x, RealInterval):
        raise TypeError("compare interval endpoints explicitly")
    return Fraction(x)


def format_sci(x: Fraction, digits: int = 6) -> str:
    """Short scientific rendering for reports; not used in any comparison."""
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    exp = _floor_log10(x)
    mant = x / Fraction(10) ** exp
    return f"{sign}{float(mant):.{digits - 1}f}e{exp:+d}"


def _floor_log10(x: Fraction) -> int:
    """floor(log10(x)) for x > 0, exactly."""
    e = len(str(x.numerator)) - len(str(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] containing the true value."""

    lo: FixedReal
    hi: FixedReal

    def __post_init__(self) -> None:
        if self.lo.to_fraction() > self.hi.to_fraction():
            raise ValueError("empty interval")

    @classmethod
    def point(cls, x: Rational, scale: int = 0) -> RealInterval:
        return cls(FixedReal.from_rational(x, scale, DOWN), FixedReal.from_rational(x, scale, UP))

    @classmethod
    def from_bounds(cls, lo: Rational, hi: Rational, scale: int) -> RealInterval:
        return cls(FixedReal.from_rational(lo, scale, DOWN), FixedReal.from_rational(hi, scale, UP))

    @property
    def scale(self) -> int:
        return max(self.lo.scale, self.hi.scale)

    @property
    def width(self) -> Fraction:
        return self.hi.to_fraction() - self.lo.to_fraction()

    def contains(self, x: Rational | RealInterval) -> bool:
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def _out(self, lo: Fraction, hi: Fraction, scale: int | None = None) -> RealInterval:
        return RealInterval.from_bounds(lo, hi, self.scale if scale is None else scale)

    def _scale_with(self, other) -> int:
        return max(self.scale, other.scale) if isinstance(other, RealInterval) else self.scale

    def __add__(self, other: RealInterval | Rational) -> RealInterval:
        c, d = _bounds(other)
        return self._out(self.lo.to_fraction() + c, self.hi.to_fraction() + d, self._scale_with(other))

    __radd__ = __add__

    def __neg__(self) -> RealInterval:
        return RealInterval(-self.hi, -self.lo)

    def __sub__(self, other: RealInterval | Rational) -> RealInterval:
        c, d = _bounds(other)
        return self._out(self.lo.to_fraction() - d, self.hi.to_fraction() - c, self._scale_with(other))

    def __rsub__(self, other: Rational) -> RealInterval:
        return (-self) + other

    def __mul__(self, other: RealInterval | Rational) -> RealInterval:
        a, b = self.lo.to_fraction(), self.hi.to_fraction()
        c, d = _bounds(other)
        prods = (a * c, a * d, b * c, b * d)
        return self._out(min(prods), max(prods), self._scale_with(other))

    __rmul__ = __mul__

    def __truediv__(self, other: RealInterval | Rational) -> RealInterval:
        c, d = _bounds(other)
        if c <= 0 <= d:
            raise ZeroDivisionError("divisor interval contains zero")
        a, b = self.lo.to_fraction(), self.hi.to_fraction()
        quots = (a / c, a / d, b / c, b / d)
        return self._out(min(quots), max(quots), self._scale_with(other))

    def __rtruediv__(self, other: Rational) -> RealInterval:
        return RealInterval.point(other, self.scale) / self

    def ln(self, prec: int | None = None) -> RealInterval:
        """Enclosure of ln over the whole interval (ln is increasing)."""
        prec = prec or max(self.scale, 30)
        if self.lo <= 0:
            raise ValueError("ln of a non-positive interval")
        lo = ln_interval(self.lo.to_fraction(), prec).lo
        hi = ln_interval(self.hi.to_fraction(), prec).hi
        return RealInterval(lo, hi)

    def max(self, other: RealInterval | Rational) -> RealInterval:
        c, d = _bounds(other)
        return self._out(max(self.lo.to_fraction(), c), max(self.hi.to_fraction(), d),
                         self._scale_with(other))

    def certainly_lt(self, other: RealInterval | Rational) -> bool:
        return self.hi.to_fraction() < _bounds(other)[0]

    def certainly_gt(self, other: RealInterval | Rational) -> bool:
        return self.lo.to_fraction() > _bounds(other)[1]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _bounds(x) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an interval, or a degenerate pair for a number."""
    if isinstance(x, RealInterval):
        return x.lo.to_fraction(), x.hi.to_fraction()
    if isinstance(x, FixedReal):
        return x.to_fraction(), x.to_fraction()
    x = Fraction(x)
    return x, x


# -- logarithms -------------------------------------------------------------

def _atanh_fixed(u: int, v: int, unit: int) -> tuple[int, int]:
    """Approximate unit * atanh(u/v) for 0 <= u/v <= 1/3.

    Returns (s, err) with |unit * atanh(u/v) - s| <= err.
    """
    if u == 0:
        return 0, 0
    uu, vv = u * u, v * v
    power = unit * u // v
    total = 0
    k = 0
    while power:
        total += power // (2 * k + 1)
        power = power * uu // vv
        k += 1
    # each truncated power is off by < 1/(1 - z^2) <= 9/8 ulp, each quotient
    # adds one more; the tail after power hits zero is below 9/8 ulp.
    return total, 3 * (k + 1)


_LN2_CACHE: dict[int, tuple[int, int]] = {}


def _ln2_fixed(digits: int) -> tuple[int, int]:
    cached = _LN2_CACHE.get(digits)
    if cached is None:
        s, err = _atanh_fixed(1, 3, 10**digits)
        cached = (2 * s, 2 * err)
        _LN2_CACHE[digits] = cached
    return cached


def ln_interval(x: Rational, prec: int) -> RealInterval:
    """Interval of scale ``prec`` containing ln(x), width at most 10**(1-prec).

    Uses ln x = k ln 2 + 2 atanh((y-1)/(y+1)) with y = x / 2**k in [2/3, 4/3].
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ln_interval needs x > 0")
    if prec < 1:
        raise ValueError("prec must be >= 1")
    if x == 1:
        return RealInterval.point(0, prec)
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** k
    while y > Fraction(4, 3):
        y /= 2
        k += 1
    while y < Fraction(2, 3):
        y *= 2
        k -= 1
    guard = 12 + len(str(abs(k))) + len(str(prec))
    work = prec + guard
    unit = 10**work
    z = (y - 1) / (y + 1)
    s, err = _atanh_fixed(abs(z.numerator), z.denominator, unit)
    s, err = 2 * s, 2 * err
    if z < 0:
        s = -s
    l2, l2err = _ln2_fixed(work)
    centre = s + k * l2
    radius = err + abs(k) * l2err + 1
    lo = Fraction(centre - radius, unit)
    hi = Fraction(centre + radius, unit)
    return RealInterval.from_bounds(lo, hi, prec)


def ln_of(x: RealInterval | Rational, prec: int = 40) -> RealInterval:
    if isinstance(x, RealInterval):
        return x.ln(prec)
    return ln_interval(x, prec)


def pow_mod(a: int, e: int, m: int) -> int:
    """a**e mod m, in [0, m)."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if e < 0:
        raise ValueError("exponent must be >= 0")
    return pow(a, e, m)


def floor_scaled(x: RealInterval, scale: int) -> int:
    """floor(scale * x), provided the interval pins it down."""
    lo = x.lo.to_fraction() * scale
    hi = x.hi.to_fraction() * scale
    flo, fhi = math.floor(lo), math.floor(hi)
    if flo != fhi:
        raise AmbiguousFloor(f"interval of width {format_sci(x.width)} too wide for scale")
    return flo

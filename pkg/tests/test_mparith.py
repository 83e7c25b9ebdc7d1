from fractions import Fraction

import mpmath
import pytest

from sigma235.mparith import (
    DOWN, UP, AmbiguousFloor, FixedReal, RealInterval, floor_scaled, format_sci, ln_interval, ln_of, pow_mod,
)


def mp_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def test_fixed_rounding_directions():
    x = Fraction(1, 3)
    lo = FixedReal.from_rational(x, 5, DOWN)
    hi = FixedReal.from_rational(x, 5, UP)
    assert lo.mantissa == 33333 and hi.mantissa == 33334
    assert lo.to_fraction() <= x <= hi.to_fraction()
    neg = FixedReal.from_rational(-x, 5, DOWN)
    assert neg.mantissa == -33334


def test_fixed_negation_flips_mode():
    v = FixedReal.from_rational(Fraction(2, 3), 4, UP)
    assert (-v).mode == DOWN
    assert (-v).to_fraction() == -v.to_fraction()


def test_fixed_bad_args():
    with pytest.raises(ValueError):
        FixedReal(1, -1)
    with pytest.raises(ValueError):
        FixedReal(1, 2, "sideways")


def test_interval_arithmetic_contains_exact():
    a = RealInterval.from_bounds(Fraction(1, 3), Fraction(1, 3), 10)
    b = RealInterval.from_bounds(Fraction(2, 7), Fraction(2, 7), 10)
    assert (a + b).contains(Fraction(1, 3) + Fraction(2, 7))
    assert (a * b).contains(Fraction(2, 21))
    assert (a / b).contains(Fraction(7, 6))
    assert (a - b).contains(Fraction(1, 21))
    assert (1 - a).contains(Fraction(2, 3))


def test_interval_times_fraction_keeps_scale():
    # multiplying by an exact rational must not widen to whole numbers
    a = RealInterval.from_bounds(Fraction(10), Fraction(10), 6)
    r = a * Fraction(106, 100)
    assert r.width < Fraction(1, 10**5)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RealInterval.from_bounds(2, 1, 3)


def test_ln_known_values():
    mpmath.mp.dps = 80
    for x in (2, 3, 5, Fraction(7, 4), Fraction(1, 10**9), 10**40 + 7):
        iv = ln_interval(x, 50)
        truth = mp_fraction(mpmath.log(mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x))
        assert iv.lo.to_fraction() <= truth <= iv.hi.to_fraction()
        assert iv.width < Fraction(1, 10**48)


def test_ln_one_and_domain():
    assert ln_interval(1, 20).contains(0)
    with pytest.raises(ValueError):
        ln_interval(0, 10)
    with pytest.raises(ValueError):
        ln_interval(-3, 10)


def test_ln_of_interval_monotone():
    x = RealInterval.from_bounds(Fraction(29, 10), Fraction(31, 10), 5)
    L = ln_of(x, 30)
    assert L.lo.to_fraction() < mp_fraction(mpmath.log(2.9) + 1e-12)
    assert L.hi.to_fraction() > mp_fraction(mpmath.log(3.1) - 1e-12)


def test_floor_scaled():
    x = ln_interval(2, 40)
    assert floor_scaled(x, 10**10) == 6931471805
    with pytest.raises(AmbiguousFloor):
        floor_scaled(RealInterval.from_bounds(Fraction(999, 1000), Fraction(1001, 1000), 4), 1)


def test_pow_mod_matches_builtin():
    for a, e, m in [(2, 10**18 + 3, 10**9 + 7), (5, 0, 13), (3, 1234, 2)]:
        assert pow_mod(a, e, m) == pow(a, e, m)
    with pytest.raises(ValueError):
        pow_mod(3, 4, 1)


def test_format_sci():
    assert format_sci(Fraction(7215460, 1), 4) == "7.215e+6"
    assert format_sci(Fraction(0)) .startswith("0")

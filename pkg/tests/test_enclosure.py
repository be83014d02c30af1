import math
from fractions import Fraction

import mpmath
import pytest

from classexpand.enclosure import Interval, e_interval, e_power, pi_interval, rational_power, root, sqrt


@pytest.mark.parametrize("bits", [16, 32, 64, 200])
def test_pi_and_e_contain_true_values(bits):
    mpmath.mp.prec = 400
    for iv, val in ((pi_interval(bits), mpmath.pi), (e_interval(bits), mpmath.e)):
        assert iv.lo < iv.hi
        assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= val
        assert mpmath.mpf(iv.hi.numerator) / iv.hi.denominator >= val
        assert iv.hi - iv.lo < Fraction(1, 2 ** (bits - 4))


def test_sqrt_of_perfect_square_is_tight():
    iv = sqrt(Interval.exact(Fraction(9, 4)))
    assert Fraction(3, 2) in iv
    assert iv.hi - iv.lo < Fraction(1, 2**50)


def test_root_brackets():
    for x in (2, 3, 10, Fraction(7, 3)):
        for k in (2, 3, 5):
            iv = root(Interval.exact(x), k)
            assert iv.lo ** k <= x <= iv.hi ** k


def test_rational_power_negative_exponent():
    iv = rational_power(Interval.exact(8), -2, 3)
    assert Fraction(1, 4) in iv


def test_e_power_contains():
    mpmath.mp.prec = 300
    for num, den in ((-5, 1), (3, 2), (-40, 1)):
        iv = e_power(num, den)
        v = mpmath.exp(mpmath.mpf(num) / den)
        assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= v <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator


def test_interval_arithmetic_is_outward():
    a = Interval(Fraction(1), Fraction(2))
    b = Interval(Fraction(3), Fraction(5))
    assert (a + b) == Interval(Fraction(4), Fraction(7))
    assert (a * b) == Interval(Fraction(3), Fraction(10))
    assert (a / b) == Interval(Fraction(1, 5), Fraction(2, 3))
    r = Interval.exact(Fraction(1, 3)).rounded(16)
    assert r.lo <= Fraction(1, 3) <= r.hi and not r.is_exact
    assert math.isclose(float(r.lo), 1 / 3, rel_tol=1e-4)

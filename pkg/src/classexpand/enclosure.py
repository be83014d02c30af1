"""Outward-rounded rational enclosures for the few real constants we need.

Every quantity is a closed interval ``[lo, hi]`` of ``Fraction`` endpoints that
is guaranteed to contain the true real value.  Only positive intervals are
supported; nothing downstream needs signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

DEFAULT_BITS = 64


def _round_down(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return x
    shift = bits - (x.numerator.bit_length() - x.denominator.bit_length())
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction(x.numerator // (x.denominator << -shift) << -shift)


def _round_up(x: Fraction, bits: int) -> Fraction:
    return -_round_down(-x, bits)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo < 0:
            raise ValueError("only nonnegative intervals are supported")

    @classmethod
    def exact(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def rounded(self, bits: int = DEFAULT_BITS) -> "Interval":
        """Widen to endpoints with about ``bits`` significant bits."""
        if self.is_exact and self.lo.denominator == 1:
            return self
        return Interval(_round_down(self.lo, bits), _round_up(self.hi, bits))

    def __add__(self, other) -> "Interval":
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, other) -> "Interval":
        other = _coerce(other)
        return Interval(self.lo * other.lo, self.hi * other.hi)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other)
        if other.lo <= 0:
            raise ZeroDivisionError("divisor interval touches zero")
        return Interval(self.lo / other.hi, self.hi / other.lo)

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            return Interval.exact(1) / (self**-k)
        return Interval(self.lo**k, self.hi**k)

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


def _coerce(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.exact(x)


def _root_floor(x: Fraction, k: int, bits: int) -> Fraction:
    """A dyadic lower bound for x**(1/k), accurate to about ``bits`` bits."""
    if x == 0:
        return Fraction(0)
    mag = (x.numerator.bit_length() - x.denominator.bit_length()) // k
    scale = max(bits - mag + 2, 0)
    # floor(x * 2^(k*scale)) then integer k-th root
    v = (x.numerator << (k * scale)) // x.denominator
    r, _ = gmpy2.iroot(gmpy2.mpz(v), k)
    return Fraction(int(r), 1 << scale)


def _root_ceil(x: Fraction, k: int, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    mag = (x.numerator.bit_length() - x.denominator.bit_length()) // k
    scale = max(bits - mag + 2, 0)
    num = x.numerator << (k * scale)
    v = -((-num) // x.denominator)
    r, exact = gmpy2.iroot(gmpy2.mpz(v), k)
    r = int(r)
    if not exact:
        r += 1
    return Fraction(r, 1 << scale)


def root(x: Interval, k: int, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of the k-th root of every point of ``x``."""
    if k < 1:
        raise ValueError("root order must be positive")
    if k == 1:
        return x
    return Interval(_root_floor(x.lo, k, bits), _root_ceil(x.hi, k, bits))


def sqrt(x: Interval, bits: int = DEFAULT_BITS) -> Interval:
    return root(x, 2, bits)


def rational_power(x: Interval, p: int, q: int, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of x**(p/q) for integers p, q > 0 (p may be negative)."""
    if q <= 0:
        raise ValueError("denominator must be positive")
    if p < 0:
        return Interval.exact(1) / rational_power(x, -p, q, bits)
    return root(x**p, q, bits).rounded(bits)


def _arctan_inv(k: int, bits: int) -> Interval:
    # alternating series sum (-1)^j / ((2j+1) k^(2j+1)); the first omitted
    # term bounds the error and its sign says which side the sum lies on
    total = Fraction(0)
    j = 0
    eps = Fraction(1, 1 << (bits + 8))
    while True:
        term = Fraction(1, (2 * j + 1) * k ** (2 * j + 1))
        if term < eps:
            break
        total += term if j % 2 == 0 else -term
        j += 1
    if j % 2 == 0:
        return Interval(total, total + term)
    return Interval(total - term, total)


@lru_cache(maxsize=None)
def pi_interval(bits: int = DEFAULT_BITS) -> Interval:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    a = _arctan_inv(5, bits + 4)
    b = _arctan_inv(239, bits + 4)
    return Interval(16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo).rounded(bits)


@lru_cache(maxsize=None)
def e_interval(bits: int = DEFAULT_BITS) -> Interval:
    # sum 1/k! for k <= K; the tail is below 2/(K+1)!
    total = Fraction(0)
    fact = 1
    k = 0
    eps = Fraction(1, 1 << (bits + 8))
    while True:
        total += Fraction(1, fact)
        k += 1
        fact *= k
        if Fraction(2, fact) < eps:
            break
    return Interval(total, total + Fraction(2, fact)).rounded(bits)


def e_power(num: int, den: int = 1, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of e**(num/den)."""
    return rational_power(e_interval(bits + 16), num, den, bits)


def pow_int_rational(base: int, num: int, den: int, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of base**(num/den) for a positive integer base; exact when possible."""
    g = math.gcd(num, den)
    num, den = num // g, den // g
    if den == 1:
        return Interval.exact(Fraction(base) ** num)
    return rational_power(Interval.exact(base), num, den, bits)

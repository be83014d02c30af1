"""Class-size bounds and expansion verdicts for S_n and A_n.

All comparisons of the form X >= Y**(1 - p/q) are decided on integers as
X**q >= Y**(q - p).  Real constants (pi, e, square roots) only enter via the
outward-rounded intervals of :mod:`classexpand.enclosure`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .cycle_types import (
    CycleType,
    alt_class_sizes,
    class_size_sym,
    enumerate_cycle_types,
    factorial,
    star_sym,
)
from sympy.utilities.iterables import partitions

from .enclosure import (
    DEFAULT_BITS,
    Interval,
    e_power,
    pi_interval,
    pow_int_rational,
    rational_power,
    sqrt,
)

__all__ = [
    "Epsilon",
    "BoundReport",
    "ExpansionVerdict",
    "power_at_least",
    "sym_class_bounds",
    "stirling_bounds",
    "stirling_class_lower",
    "term1_ratio",
    "term2_ratio",
    "term3_lower",
    "support_threshold",
    "expansion_verdict",
    "eta_sym",
    "class_sizes",
    "class_count_at_most",
    "count_within_power",
]


@dataclass(frozen=True)
class Epsilon:
    p: int
    q: int

    def __post_init__(self):
        if not 0 < self.p < self.q:
            raise ValueError(f"epsilon must lie strictly between 0 and 1, got {self.p}/{self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"epsilon {self.p}/{self.q} is not in lowest terms")

    @classmethod
    def of(cls, value) -> "Epsilon":
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "Epsilon":
        """Accept only ``p/q``; decimals are rejected to keep verdicts exact."""
        text = text.strip()
        if "/" not in text:
            raise ValueError(f"epsilon must be written as p/q, got {text!r}")
        a, b = text.split("/", 1)
        if not (a.strip().isdigit() and b.strip().isdigit()):
            raise ValueError(f"epsilon must be written as p/q, got {text!r}")
        return cls.of(Fraction(int(a), int(b)))

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class BoundReport:
    lower: Fraction
    upper: Fraction
    subject: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def power_at_least(x: int, y: int, exponent: Fraction) -> bool:
    """Exact test of x >= y**exponent for nonnegative integers and 0 <= exponent."""
    exponent = Fraction(exponent)
    return x**exponent.denominator >= y**exponent.numerator


def _check_support(n: int, s: int) -> None:
    if n < 1 or not 0 <= s <= n or s == 1:
        raise ValueError(f"invalid support s={s} for n={n}")


def sym_class_bounds(n: int, s: int) -> BoundReport:
    """n!/((n-s)! 2^(s/2) (s/2)!) <= |C| <= n!/(n-s)! for classes of support s.

    For odd s the factorial uses ceil(s/2) and the power of two floor(s/2).
    """
    _check_support(n, s)
    falling = factorial(n) // factorial(n - s)
    lower = Fraction(falling, 2 ** (s // 2) * factorial((s + 1) // 2))
    return BoundReport(lower, Fraction(falling), f"S_{n} classes of support {s}")


def _stirling_core(n: int, bits: int) -> Interval:
    # sqrt(2 pi n) * n^n / e^n
    root = sqrt(pi_interval(bits + 8) * (2 * n), bits + 8)
    return (root * n**n * e_power(-n, 1, bits + 8)).rounded(bits)


def stirling_bounds(n: int, bits: int = DEFAULT_BITS) -> BoundReport:
    """[lo, hi] with lo <= sqrt(2 pi n)(n/e)^n and hi >= 2 sqrt(2 pi n)(n/e)^n."""
    if n < 1:
        raise ValueError("n must be positive")
    core = _stirling_core(n, bits)
    return BoundReport(core.lo, 2 * core.hi, f"Stirling enclosure of {n}!")


def stirling_class_lower(n: int, s: int, bits: int = DEFAULT_BITS) -> Fraction:
    """A rational not exceeding n^(s/2) e^(-s/2) / (4 sqrt(pi n))."""
    _check_support(n, s)
    num = pow_int_rational(n, s, 2, bits + 8)
    den = sqrt(pi_interval(bits + 8) * n, bits + 8) * 4 * e_power(s, 2, bits + 8)
    return (num / den).rounded(bits).lo


def term1_ratio(n: int, s1: int, s2: int) -> Fraction:
    """(n-s1)!(n-s2)! / (n!(n-s1-s2)!), for s1, s2 <= n/3."""
    if min(s1, s2) < 0 or 3 * s1 > n or 3 * s2 > n:
        raise ValueError(f"term1 needs 0 <= s1, s2 <= n/3 (n={n}, s1={s1}, s2={s2})")
    return Fraction(
        factorial(n - s1) * factorial(n - s2),
        factorial(n) * factorial(n - s1 - s2),
    )


def term2_ratio(ct1: CycleType, ct2: CycleType) -> Fraction:
    """prod c_i! d_i! / prod (c_i + d_i)! over cycle lengths i >= 2."""
    if ct1.n != ct2.n:
        raise ValueError("cycle types have different degrees")
    c, d = ct1.as_dict(), ct2.as_dict()
    num = den = 1
    for i in set(c) | set(d):
        if i < 2:
            continue
        a, b = c.get(i, 0), d.get(i, 0)
        num *= factorial(a) * factorial(b)
        den *= factorial(a + b)
    return Fraction(num, den)


def term3_lower(n: int, s1: int) -> int:
    """ceil(s1^(s1/2)), a lower bound for every class of support s1 <= n/2."""
    if s1 < 2 or 2 * s1 > n:
        raise ValueError(f"term3 needs 2 <= s1 <= n/2 (n={n}, s1={s1})")
    if s1 % 2 == 0:
        return s1 ** (s1 // 2)
    v = s1**s1
    r = math.isqrt(v)
    return r if r * r == v else r + 1


def class_sizes(n: int, alternating: bool = False) -> list[tuple[CycleType, int]]:
    """(type, size) for every class of S_n, or of A_n with split classes listed twice."""
    out = []
    for ct in enumerate_cycle_types(n):
        if not alternating:
            out.append((ct, class_size_sym(ct)))
        elif ct.is_even:
            out.extend((ct, size) for size in alt_class_sizes(ct))
    return out


def support_threshold(n: int, alternating: bool = False) -> list[CycleType]:
    """Cycle types with |C|^8 <= |G| but support > n/3 (expected: none).

    Meant for n >= 40 (S_n) or n >= 45 (A_n); smaller n are allowed and
    may well produce violations.
    """
    if n < 1:
        raise ValueError("n must be positive")
    order = factorial(n) // 2 if alternating and n >= 2 else factorial(n)
    falling8 = [(factorial(n) // factorial(n - s)) ** 8 for s in range(n + 1)]
    violations = []
    for part in partitions(n):
        s = n - part.get(1, 0)
        if 3 * s <= n:
            continue
        if alternating and sum(c for i, c in part.items() if i % 2 == 0) % 2:
            continue
        den = 1
        split = alternating and n > 1
        for i, c in part.items():
            if i >= 2:
                den *= i**c * factorial(c)
            if c > 1 or i % 2 == 0:
                split = False
        # |C| = falling / den, halved if the class splits in A_n
        rhs = order * den**8
        if split:
            rhs <<= 8
        if falling8[s] <= rhs:
            violations.append(CycleType.from_mult(part))
    return violations


@dataclass(frozen=True)
class ExpansionVerdict:
    n: int
    type1: CycleType
    type2: CycleType
    star_type: CycleType
    size1: int
    size2: int
    star_size: int
    epsilon: Epsilon
    holds: bool

    def record(self) -> dict:
        return {
            "n": self.n,
            "type1": str(self.type1),
            "type2": str(self.type2),
            "size1": self.size1,
            "size2": self.size2,
            "star_size": self.star_size,
            "epsilon": str(self.epsilon),
            "verdict": self.holds,
        }


def expansion_verdict(n: int, ct1: CycleType, ct2: CycleType, eps: Epsilon) -> ExpansionVerdict:
    """Decide |C1*C2| >= (|C1||C2|)^(1-eps); this implies the same for C1C2."""
    if ct1.n != n or ct2.n != n:
        raise ValueError(f"cycle types must have degree {n}")
    star = star_sym(ct1, ct2)
    a, b, x = class_size_sym(ct1), class_size_sym(ct2), class_size_sym(star)
    holds = x**eps.q >= (a * b) ** (eps.q - eps.p)
    return ExpansionVerdict(n, ct1, ct2, star, a, b, x, eps, holds)


def _neg_power_sum(sizes: Iterable[int], s: Fraction, bits: int) -> Interval:
    total = Interval.exact(0)
    for size in sizes:
        if s.denominator == 1:
            total = total + Interval.exact(Fraction(1, size ** s.numerator))
        else:
            total = total + rational_power(Interval.exact(size), -s.numerator, s.denominator, bits + 8)
    return total if total.is_exact else total.rounded(bits)


def eta_sym(n: int, s=1, alternating: bool = False, bits: int = DEFAULT_BITS) -> Interval:
    """Sum of |C|^(-s) over the classes of S_n (or A_n); exact for integer s."""
    s = Fraction(s)
    if n < 1 or s <= 0:
        raise ValueError("need n >= 1 and s > 0")
    return _neg_power_sum((size for _, size in class_sizes(n, alternating)), s, bits)


def class_count_at_most(n: int, m: int, alternating: bool = False) -> int:
    """Number of classes of S_n (or A_n) of size at most m."""
    return sum(1 for _, size in class_sizes(n, alternating) if size <= m)


def count_within_power(count: int, m: int, eps: Epsilon) -> bool:
    """count <= m^eps, exactly."""
    return count**eps.q <= m**eps.p

"""Cycle types of permutations and exact class sizes in S_n and A_n.

A cycle type is stored as ``(length, multiplicity)`` pairs with lengths in
descending order and only nonzero multiplicities kept.  All sizes are exact
Python integers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from sympy.utilities.iterables import partitions

from .errors import ParseError, SupportOverflow

__all__ = [
    "CycleType",
    "SplitPair",
    "enumerate_cycle_types",
    "support",
    "class_size_sym",
    "class_size_alt",
    "alt_class_total",
    "splits_in_alternating",
    "star_sym",
    "factorial",
]


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return math.factorial(n)


@dataclass(frozen=True)
class CycleType:
    n: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"degree must be positive, got {self.n}")
        total = 0
        prev = None
        for i, c in self.terms:
            if i < 1 or c < 1:
                raise ValueError(f"bad term {i}^{c}")
            if prev is not None and i >= prev:
                raise ValueError("terms must have strictly descending lengths")
            prev = i
            total += i * c
        if total != self.n:
            raise ValueError(f"cycle lengths sum to {total}, not {self.n}")

    @classmethod
    def from_mult(cls, mult: Mapping[int, int], n: int | None = None) -> "CycleType":
        """Build from a ``{length: multiplicity}`` map.

        When ``n`` is given and exceeds the moved total, the remainder is
        filled with fixed points.
        """
        m = {i: c for i, c in mult.items() if c}
        total = sum(i * c for i, c in m.items())
        if n is not None and total < n:
            m[1] = m.get(1, 0) + n - total
            total = n
        return cls(total, tuple(sorted(m.items(), reverse=True)))

    @classmethod
    def from_parts(cls, parts, n: int | None = None) -> "CycleType":
        mult: dict[int, int] = {}
        for p in parts:
            mult[p] = mult.get(p, 0) + 1
        return cls.from_mult(mult, n)

    @classmethod
    def identity(cls, n: int) -> "CycleType":
        return cls(n, ((1, n),))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "CycleType":
        """Parse ``"3^1 2^2 1^2"`` (``^1`` may be omitted).

        Lengths and exponents must be positive and lengths may not repeat.
        If ``n`` is given, missing points become fixed points; a type that
        moves more than ``n`` points is rejected.
        """
        mult: dict[int, int] = {}
        for m in re.finditer(r"\S+", text):
            tok, pos = m.group(), m.start()
            tm = re.fullmatch(r"(-?\d+)(?:\^(-?\d+))?", tok)
            if tm is None:
                raise ParseError(f"malformed term {tok!r}", pos)
            i = int(tm.group(1))
            c = int(tm.group(2)) if tm.group(2) is not None else 1
            if i <= 0:
                raise ParseError(f"cycle length must be positive in {tok!r}", pos)
            if c <= 0:
                raise ParseError(f"multiplicity must be positive in {tok!r}", pos)
            if i in mult:
                raise ParseError(f"duplicate cycle length {i}", pos)
            mult[i] = c
        if not mult:
            raise ParseError("empty cycle type", 0)
        total = sum(i * c for i, c in mult.items())
        if n is not None and total > n:
            raise ParseError(f"type has degree {total} > n={n}", 0)
        return cls.from_mult(mult, n)

    def mult(self, i: int) -> int:
        for j, c in self.terms:
            if j == i:
                return c
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def parts(self) -> list[int]:
        return [i for i, c in self.terms for _ in range(c)]

    @property
    def support(self) -> int:
        return self.n - self.mult(1)

    @property
    def is_even(self) -> bool:
        # a permutation is even iff it has an even number of even-length cycles
        return sum(c for i, c in self.terms if i % 2 == 0) % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.support == 0

    def __str__(self) -> str:
        return " ".join(f"{i}^{c}" for i, c in self.terms)


@dataclass(frozen=True)
class SplitPair:
    """Two A_n classes of equal size fusing into one S_n class."""

    first: int
    second: int

    @property
    def total(self) -> int:
        return self.first + self.second


def enumerate_cycle_types(n: int) -> Iterator[CycleType]:
    """All cycle types of degree ``n`` in reverse-lexicographic order.

    ``n=4`` gives 4, 3 1, 2^2, 2 1^2, 1^4.
    """
    if n < 1:
        raise ValueError("n must be positive")
    for p in partitions(n):
        # sympy reuses the dict between iterations
        yield CycleType(n, tuple(sorted(p.items(), reverse=True)))


def support(ct: CycleType) -> int:
    return ct.support


def class_size_sym(ct: CycleType) -> int:
    """|C| = n! / ((n-s)! * prod_{i>=2} i^c_i * prod_{i>=2} c_i!).

    Fixed points enter only through (n-s)! = c_1!, so the multiplicity
    factorials run over moved cycle lengths only.  This is the same number
    as the usual n!/prod_i (i^c_i c_i!).
    """
    s = ct.support
    den = factorial(ct.n - s)
    for i, c in ct.terms:
        if i >= 2:
            den *= i**c * factorial(c)
    return factorial(ct.n) // den


def splits_in_alternating(ct: CycleType) -> bool:
    """An S_n class of even permutations splits in A_n iff its cycle
    lengths are odd and pairwise distinct (fixed points count as a 1-cycle).

    The identity of S_1 is the one exception: a class of size 1 cannot split.
    """
    return ct.n > 1 and all(i % 2 == 1 and c == 1 for i, c in ct.terms)


def class_size_alt(ct: CycleType) -> int | SplitPair:
    if not ct.is_even:
        raise ValueError(f"cycle type {ct} is odd, not in A_{ct.n}")
    size = class_size_sym(ct)
    if splits_in_alternating(ct):
        return SplitPair(size // 2, size // 2)
    return size


def alt_class_total(ct: CycleType) -> int:
    r = class_size_alt(ct)
    return r.total if isinstance(r, SplitPair) else r


def alt_class_sizes(ct: CycleType) -> list[int]:
    r = class_size_alt(ct)
    return [r.first, r.second] if isinstance(r, SplitPair) else [r]


def star_sym(ct1: CycleType, ct2: CycleType) -> CycleType:
    """Type of pi1 * pi2' where pi2' ~ pi2 moves only fixed points of pi1."""
    if ct1.n != ct2.n:
        raise ValueError("cycle types have different degrees")
    s1, s2 = ct1.support, ct2.support
    if s1 + s2 > ct1.n:
        raise SupportOverflow(f"supports {s1}+{s2} exceed n={ct1.n}")
    mult: dict[int, int] = {}
    for ct in (ct1, ct2):
        for i, c in ct.terms:
            if i >= 2:
                mult[i] = mult.get(i, 0) + c
    return CycleType.from_mult(mult, ct1.n)

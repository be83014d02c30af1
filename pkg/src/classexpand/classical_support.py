"""Support calculus for classical groups.

Elements are described only through the Jordan structure on their dominant
eigenspace: block multiplicities ``{i: n_i}`` plus the dimension ``k`` of the
complementary summand.  Eigenvalues are symbolic tags; no field arithmetic
is ever needed.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ParseError, SupportTooLarge
from .sym_expansion import Epsilon

__all__ = [
    "Family",
    "EigenTag",
    "ClassicalGroupSpec",
    "JordanDescriptor",
    "ExponentInterval",
    "NextOneVerdict",
    "AlgebraicExpansion",
    "is_prime_power",
    "a_of",
    "exponent_f",
    "exponent_g",
    "exponent_g_prime_range",
    "exponent_h",
    "exponent_h_prime_range",
    "class_size_exponents",
    "eps_exponents",
    "support_upper_bound",
    "star_classical",
    "nextone_verdict",
    "algebraic_dim_bounds",
    "algebraic_expansion_check",
    "parse_blocks",
]


class Family(enum.Enum):
    LINEAR = "L"
    UNITARY = "U"
    SYMPLECTIC = "Sp"
    ORTHOGONAL_PLUS = "O+"
    ORTHOGONAL_MINUS = "O-"

    @classmethod
    def parse(cls, text: str) -> "Family":
        aliases = {
            "L": cls.LINEAR, "SL": cls.LINEAR, "PSL": cls.LINEAR, "GL": cls.LINEAR,
            "U": cls.UNITARY, "SU": cls.UNITARY, "PSU": cls.UNITARY,
            "SP": cls.SYMPLECTIC, "PSP": cls.SYMPLECTIC,
            "O+": cls.ORTHOGONAL_PLUS, "O": cls.ORTHOGONAL_PLUS, "SO": cls.ORTHOGONAL_PLUS,
            "O-": cls.ORTHOGONAL_MINUS,
        }
        try:
            return aliases[text.strip().upper()]
        except KeyError:
            raise ParseError(f"unknown classical family {text!r}") from None


class EigenTag(enum.Enum):
    PLUS_ONE = "+1"
    MINUS_ONE = "-1"
    UNIT = "unit"  # lambda * conj(lambda) = 1
    GENERIC = "generic"

    @classmethod
    def parse(cls, text: str) -> "EigenTag":
        t = text.strip().lower()
        for tag in cls:
            if t == tag.value:
                return tag
        if t in ("1", "plusone"):
            return cls.PLUS_ONE
        if t == "minusone":
            return cls.MINUS_ONE
        raise ParseError(f"unknown eigenvalue tag {text!r}")

    def __mul__(self, other: "EigenTag") -> "EigenTag":
        signs = {EigenTag.PLUS_ONE: 1, EigenTag.MINUS_ONE: -1}
        if self in signs and other in signs:
            return EigenTag.PLUS_ONE if signs[self] * signs[other] == 1 else EigenTag.MINUS_ONE
        if EigenTag.GENERIC in (self, other):
            return EigenTag.GENERIC
        return EigenTag.UNIT


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


@dataclass(frozen=True)
class ClassicalGroupSpec:
    family: Family
    n: int
    q: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if not is_prime_power(self.q):
            raise ValueError(f"q={self.q} is not a prime power")
        if self.family is Family.SYMPLECTIC and self.n % 2:
            raise ValueError("symplectic groups need even dimension")

    @classmethod
    def parse(cls, text: str) -> "ClassicalGroupSpec":
        """``"L 3 2"``, ``"Sp 8 3"``, ``"O- 10 5"``."""
        toks = text.split()
        if len(toks) != 3:
            raise ParseError(f"expected 'family n q', got {text!r}")
        fam = Family.parse(toks[0])
        try:
            n, q = int(toks[1]), int(toks[2])
        except ValueError:
            raise ParseError(f"dimension and field size must be integers in {text!r}") from None
        return cls(fam, n, q)

    @property
    def a(self) -> Fraction:
        return a_of(self)

    @property
    def u(self) -> int:
        return 2 if self.family is Family.UNITARY else 1

    def __str__(self) -> str:
        return f"{self.family.value} {self.n} {self.q}"


def a_of(spec: ClassicalGroupSpec | Family) -> Fraction:
    fam = spec.family if isinstance(spec, ClassicalGroupSpec) else spec
    return Fraction(1) if fam in (Family.LINEAR, Family.UNITARY) else Fraction(1, 2)


def _clean_blocks(blocks: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    for i, c in blocks.items():
        if i < 1 or c < 0:
            raise ValueError(f"bad block term {i}^{c}")
    return tuple(sorted(((i, c) for i, c in blocks.items() if c), reverse=True))


def parse_blocks(text: str) -> dict[int, int]:
    """``"2^1 1^6"`` -> {2: 1, 1: 6}; an empty string or ``-`` means no blocks."""
    out: dict[int, int] = {}
    if text.strip() in ("", "-"):
        return out
    for m in re.finditer(r"\S+", text):
        tok, pos = m.group(), m.start()
        tm = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
        if tm is None:
            raise ParseError(f"malformed block term {tok!r}", pos)
        i = int(tm.group(1))
        c = int(tm.group(2)) if tm.group(2) is not None else 1
        if i <= 0 or c <= 0:
            raise ParseError(f"block size and multiplicity must be positive in {tok!r}", pos)
        if i in out:
            raise ParseError(f"duplicate block size {i}", pos)
        out[i] = c
    return out


@dataclass(frozen=True)
class JordanDescriptor:
    """Eigenvalue tag, Jordan blocks on the dominant eigenspace, and the
    dimension ``k`` of the summand without that eigenvalue."""

    tag: EigenTag
    blocks: tuple[tuple[int, int], ...]
    k: int = 0
    spec: ClassicalGroupSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.spec is not None:
            if self.n != self.spec.n:
                raise ValueError(f"descriptor has dimension {self.n}, group has {self.spec.n}")
            if self.spec.family in (Family.SYMPLECTIC, Family.ORTHOGONAL_PLUS, Family.ORTHOGONAL_MINUS):
                if self.tag not in (EigenTag.PLUS_ONE, EigenTag.MINUS_ONE):
                    raise ValueError("symplectic and orthogonal descriptors need eigenvalue +1 or -1")

    @classmethod
    def make(cls, blocks: Mapping[int, int], k: int = 0, tag: EigenTag = EigenTag.PLUS_ONE,
             spec: ClassicalGroupSpec | None = None) -> "JordanDescriptor":
        return cls(tag, _clean_blocks(blocks), k, spec)

    @classmethod
    def parse(cls, text: str) -> "JordanDescriptor":
        """``"Sp 8 3 | +1 | 2^1 1^6 | 0"``."""
        fields = text.split("|")
        if len(fields) != 4:
            raise ParseError(f"descriptor needs 4 '|'-separated fields, got {len(fields)}")
        spec = ClassicalGroupSpec.parse(fields[0])
        tag = EigenTag.parse(fields[1])
        offset = len(fields[0]) + len(fields[1]) + 2
        try:
            blocks = parse_blocks(fields[2])
        except ParseError as e:
            raise ParseError(str(e).rsplit(" (at", 1)[0], offset + e.position) from None
        try:
            k = int(fields[3])
        except ValueError:
            raise ParseError(f"k must be an integer, got {fields[3].strip()!r}",
                             offset + len(fields[2]) + 1) from None
        return cls.make(blocks, k, tag, spec)

    def mult(self, i: int) -> int:
        return dict(self.blocks).get(i, 0)

    @property
    def n(self) -> int:
        return self.k + sum(i * c for i, c in self.blocks)

    @property
    def t(self) -> int:
        return self.mult(1)

    @property
    def r(self) -> int:
        return sum(c for i, c in self.blocks if i >= 2)

    @property
    def support(self) -> int:
        return self.n - sum(c for _, c in self.blocks)

    def __str__(self) -> str:
        head = str(self.spec) if self.spec is not None else f"? {self.n} ?"
        body = " ".join(f"{i}^{c}" for i, c in self.blocks) or "-"
        return f"{head} | {self.tag.value} | {body} | {self.k}"


@dataclass(frozen=True)
class ExponentInterval:
    lo: Fraction
    hi: Fraction
    constant_caveat: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty exponent interval")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def record(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "constant_caveat": self.constant_caveat}


def _as_blocks(blocks) -> dict[int, int]:
    if isinstance(blocks, JordanDescriptor):
        return dict(blocks.blocks)
    return {i: c for i, c in dict(blocks).items() if c}


def exponent_f(blocks) -> int:
    """sum_i i n_i^2 + 2 sum_{i<j} i n_i n_j."""
    b = sorted(_as_blocks(blocks).items())
    f = 0
    for x, (i, ni) in enumerate(b):
        f += i * ni * ni
        for j, nj in b[x + 1:]:
            f += 2 * i * ni * nj
    return f


def _odd_count(blocks) -> int:
    return sum(c for i, c in _as_blocks(blocks).items() if i % 2)


def _even_count(blocks) -> int:
    return sum(c for i, c in _as_blocks(blocks).items() if i % 2 == 0)


def exponent_g(blocks) -> int:
    """sum_i i n_i^2 + 2 sum_{i<j} i n_i n_j + sum_{i odd} n_i."""
    b = sorted(_as_blocks(blocks).items())
    g = 0
    for x, (i, ni) in enumerate(b):
        g += i * ni * ni + (ni if i % 2 else 0)
        for j, nj in b[x + 1:]:
            g += 2 * i * ni * nj
    return g


def exponent_g_prime_range(blocks) -> tuple[int, int]:
    """[g, g + 2 sum_{i even} n_i]: the range of g' for q even."""
    g = exponent_g(blocks)
    return g, g + 2 * _even_count(blocks)


def exponent_h(blocks) -> int:
    """sum_i i n_i^2 + 2 sum_{i<j} i n_i n_j - sum_{i odd} n_i."""
    b = sorted(_as_blocks(blocks).items())
    h = 0
    for x, (i, ni) in enumerate(b):
        h += i * ni * ni - (ni if i % 2 else 0)
        for j, nj in b[x + 1:]:
            h += 2 * i * ni * nj
    return h


def exponent_h_prime_range(blocks) -> tuple[int, int]:
    h = exponent_h(blocks)
    return h - 2 * _even_count(blocks), h


def class_size_exponents(spec: ClassicalGroupSpec, s: int) -> ExponentInterval:
    """Exponents of q bounding |x^G| for support s < n/2, up to constants."""
    n, a = spec.n, spec.a
    if s < 0 or 2 * s >= n:
        raise ValueError(f"need 0 <= s < n/2 (n={n}, s={s})")
    return ExponentInterval(2 * a * s * (n - s - 1), a * s * (2 * n - s + 1))


def eps_exponents(spec: ClassicalGroupSpec, s: int, eps1) -> ExponentInterval:
    """[(2a - eps1) n s, (2a + eps1) n s].

    Valid only for classes with |x^G| <= |G|^delta for a suitable delta;
    that hypothesis is not checked here.
    """
    e1 = eps1.value if isinstance(eps1, Epsilon) else Fraction(eps1)
    if s < 0 or e1 < 0:
        raise ValueError("support and eps1 must be nonnegative")
    a, n = spec.a, spec.n
    return ExponentInterval((2 * a - e1) * n * s, (2 * a + e1) * n * s, constant_caveat=False)


def support_upper_bound(spec_or_n, delta, d=0) -> Fraction:
    """2 delta n + d/n, for 0 < delta <= 1/4 and a caller-supplied d >= 0."""
    n = spec_or_n.n if isinstance(spec_or_n, ClassicalGroupSpec) else int(spec_or_n)
    delta, d = Fraction(delta), Fraction(d)
    if not 0 < delta <= Fraction(1, 4):
        raise ValueError("delta must lie in (0, 1/4]")
    if d < 0:
        raise ValueError("d must be nonnegative")
    return 2 * delta * n + d / n


def star_classical(x1: JordanDescriptor, x2: JordanDescriptor, n: int | None = None) -> JordanDescriptor:
    """Descriptor of y = x1 * x2.

    y has eigenvalue tag lambda1*lambda2, an identity part of dimension
    t1 + t2 - n, the nontrivial Jordan blocks of both factors, and
    complementary dimension k1 + k2.
    """
    if n is None:
        n = x1.n
    if x1.n != n or x2.n != n:
        raise ValueError(f"descriptors must both have dimension {n}")
    for x in (x1, x2):
        if 4 * x.support >= n:
            raise SupportTooLarge(f"support {x.support} is not below n/4 = {Fraction(n, 4)}")
    ident = x1.t + x2.t - n
    if ident < 0:
        raise SupportTooLarge("t1 + t2 < n")
    blocks: dict[int, int] = {1: ident}
    for x in (x1, x2):
        for i, c in x.blocks:
            if i >= 2:
                blocks[i] = blocks.get(i, 0) + c
    spec = x1.spec if x1.spec is not None else x2.spec
    return JordanDescriptor.make(blocks, x1.k + x2.k, x1.tag * x2.tag, spec)


@dataclass(frozen=True)
class NextOneVerdict:
    a: Fraction
    epsilon: Fraction
    eps1: Fraction
    n: int
    support_sum: int
    star_lower_exponent: Fraction  # (2a - eps1) n (s1 + s2)
    product_upper_exponent: Fraction  # (2a + eps1) n (s1 + s2)
    ratio: Fraction
    holds: bool

    def record(self) -> dict:
        return {
            "a": str(self.a), "epsilon": str(self.epsilon), "eps1": str(self.eps1),
            "n": self.n, "support_sum": self.support_sum,
            "star_lower_exponent": str(self.star_lower_exponent),
            "product_upper_exponent": str(self.product_upper_exponent),
            "ratio": str(self.ratio), "verdict": self.holds,
        }


def nextone_verdict(spec: ClassicalGroupSpec, x1: JordanDescriptor, x2: JordanDescriptor,
                    eps: Epsilon, eps1=None) -> NextOneVerdict:
    """Exponent comparison showing |y^G| >= (|x1^G||x2^G|)^(1-eps).

    ``eps1`` defaults to eps/2.  The verdict is the ratio test
    (2a - eps1)/(2a + eps1) >= 1 - eps, which is equivalent to the exponent
    inequality whenever s1 + s2 > 0.
    """
    y = star_classical(x1, x2, spec.n)
    e = eps.value
    e1 = e / 2 if eps1 is None else Fraction(eps1)
    a, n = spec.a, spec.n
    sy = y.support
    lo = (2 * a - e1) * n * sy
    hi = (2 * a + e1) * n * sy
    ratio = (2 * a - e1) / (2 * a + e1)
    holds = ratio >= 1 - e and lo >= (1 - e) * hi
    return NextOneVerdict(a, e, e1, n, sy, lo, hi, ratio, holds)


def algebraic_dim_bounds(family: Family | ClassicalGroupSpec, n: int, s: int) -> ExponentInterval:
    """2as(n-s-1) <= dim x^G <= as(2n-s+1) over an algebraically closed field."""
    if isinstance(family, ClassicalGroupSpec):
        family = family.family
    a = a_of(family)
    if s < 0 or 2 * s >= n:
        raise ValueError(f"need 0 <= s < n/2 (n={n}, s={s})")
    return ExponentInterval(2 * a * s * (n - s - 1), a * s * (2 * n - s + 1), constant_caveat=False)


def linear_class_dimension(blocks: Mapping[int, int], k: int = 0) -> int:
    """dim of the GL_n class of a unipotent element with the given blocks (k = 0)."""
    if k:
        raise ValueError("only k = 0 is supported")
    n = sum(i * c for i, c in blocks.items())
    return n * n - exponent_f(blocks)


@dataclass(frozen=True)
class AlgebraicExpansion:
    star_dim_lower: Fraction
    factors_dim_upper: Fraction
    epsilon: Fraction
    holds: bool


def algebraic_expansion_check(family: Family | ClassicalGroupSpec, n: int, s1: int, s2: int,
                              eps: Epsilon) -> AlgebraicExpansion:
    """Compare the guaranteed dimension of the star class (support s1+s2)
    with (1-eps) times the largest possible dim A1 + dim A2."""
    lo = algebraic_dim_bounds(family, n, s1 + s2).lo
    hi = algebraic_dim_bounds(family, n, s1).hi + algebraic_dim_bounds(family, n, s2).hi
    e = eps.value
    return AlgebraicExpansion(lo, hi, e, lo >= (1 - e) * hi)

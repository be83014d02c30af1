"""Brute-force finite groups: S_n, A_n and small matrix groups over F_p.

Every element is stored in a canonical hashable form (image tuples for
permutations, row-major entry tuples for matrices), the whole group is held
in memory, and conjugacy classes are computed as conjugation orbits.  This is
deliberately naive; it is the ground truth the formulas are checked against.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .cycle_types import CycleType, class_size_sym, star_sym
from .enclosure import DEFAULT_BITS, Interval
from .errors import GuardExceeded, ParseError
from .sym_expansion import Epsilon, _neg_power_sum

MAX_DEGREE = 8
MAX_ORDER = 10**6
DEFAULT_COVERING_CAP = 20
CACHE_VERSION = 1

Element = tuple[int, ...]

__all__ = [
    "GroupSnapshot",
    "NormalSubset",
    "build_symmetric",
    "build_alternating",
    "build_matrix_group",
    "build_group",
    "product_set",
    "product_set_naive",
    "covering_number",
    "largest_class_in",
    "bigclass_check",
    "class_count_profile",
    "size_prop_check",
    "eta_exact",
    "star_containment_check",
    "kfold_expansion_check",
    "perm_cycle_type",
    "matrix_rank",
    "unipotent_blocks",
    "dominant_eigenspace_dim",
]


# -- element arithmetic -------------------------------------------------------

def perm_mul(a: Element, b: Element) -> Element:
    # (a*b)(i) = a(b(i))
    return tuple(a[x] for x in b)


def perm_cycle_type(p: Element) -> CycleType:
    n = len(p)
    seen = [False] * n
    lengths = []
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            lengths.append(length)
    return CycleType.from_parts(lengths)


def _is_even_perm(p: Element) -> bool:
    return perm_cycle_type(p).is_even


def mat_mul(d: int, p: int) -> Callable[[Element, Element], Element]:
    rng = range(d)

    def mul(a: Element, b: Element) -> Element:
        return tuple(
            sum(a[i * d + k] * b[k * d + j] for k in rng) % p
            for i in rng
            for j in rng
        )

    return mul


def _identity_matrix(d: int) -> Element:
    return tuple(int(i == j) for i in range(d) for j in range(d))


def matrix_rank(m: Sequence[int], d: int, p: int) -> int:
    """Rank of a d x d matrix over F_p (p prime)."""
    rows = [[m[i * d + j] % p for j in range(d)] for i in range(d)]
    rank = 0
    for col in range(d):
        pivot = next((r for r in range(rank, d) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(d):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _mat_sub_scalar(m: Sequence[int], lam: int, d: int, p: int) -> list[int]:
    return [(m[i] - (lam if i % (d + 1) == 0 else 0)) % p for i in range(d * d)]


def unipotent_blocks(m: Sequence[int], d: int, p: int) -> dict[int, int] | None:
    """Jordan block multiplicities of a unipotent matrix, or None if not unipotent."""
    n_minus = _mat_sub_scalar(m, 1, d, p)
    mul = mat_mul(d, p)
    powers = [_identity_matrix(d)]
    for _ in range(d):
        powers.append(mul(powers[-1], tuple(n_minus)))
    if any(powers[d]):
        return None
    ranks = [matrix_rank(x, d, p) for x in powers]
    # blocks of size >= k number rank(N^(k-1)) - rank(N^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, d + 1)] + [0]
    return {k: at_least[k - 1] - at_least[k] for k in range(1, d + 1) if at_least[k - 1] - at_least[k]}


def dominant_eigenspace_dim(m: Sequence[int], d: int, p: int) -> int:
    """Largest dimension of an eigenspace of m over F_p (0 if no eigenvalue)."""
    return max(d - matrix_rank(_mat_sub_scalar(m, lam, d, p), d, p) for lam in range(1, p))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


# -- snapshots ---------------------------------------------------------------

@dataclass(frozen=True)
class NormalSubset:
    group: str
    class_ids: frozenset[int]
    size: int

    def __contains__(self, cid: int) -> bool:
        return cid in self.class_ids


class GroupSnapshot:
    """A fully enumerated group with its class partition.

    ``classes[0]`` is always the identity class.  Other classes are ordered
    by size, then by smallest element.  Built once and then treated as
    read-only; the pairwise class-product cache is the only mutable state.
    """

    def __init__(self, name: str, elements: Sequence[Element], mul, classes: Sequence[Sequence[int]],
                 labels: Sequence[CycleType] | None = None, center_quotient: bool = False,
                 meta: dict | None = None):
        self.name = name
        self.elements = tuple(elements)
        self.mul = mul
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.classes = tuple(tuple(c) for c in classes)
        self.labels = tuple(labels) if labels is not None else None
        self.center_quotient = center_quotient
        self.meta = dict(meta or {})
        class_of = [0] * len(self.elements)
        for cid, cls in enumerate(self.classes):
            for e in cls:
                class_of[e] = cid
        self.class_of = tuple(class_of)
        self._pair_cache: dict[tuple[int, int], frozenset[int]] = {}
        if sum(len(c) for c in self.classes) != len(self.elements):
            raise ValueError("classes do not partition the group")
        if len(self.classes[0]) != 1:
            raise ValueError("class 0 must be the identity class")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def identity(self) -> Element:
        return self.elements[self.classes[0][0]]

    def rep(self, cid: int) -> Element:
        return self.elements[self.classes[cid][0]]

    def class_of_element(self, x: Element) -> int:
        try:
            return self.class_of[self.index[x]]
        except KeyError:
            raise ValueError(f"{x} is not an element of {self.name}") from None

    def normal_subset(self, class_ids: Iterable[int]) -> NormalSubset:
        ids = frozenset(class_ids)
        for cid in ids:
            if not 0 <= cid < len(self.classes):
                raise ValueError(f"{self.name} has no class {cid}")
        return NormalSubset(self.name, ids, sum(len(self.classes[c]) for c in ids))

    def whole(self) -> NormalSubset:
        return self.normal_subset(range(len(self.classes)))

    def subset_from_elements(self, elements: Iterable[Element]) -> NormalSubset:
        """The normal subset with exactly these elements; rejects non-members
        and sets that are not unions of classes."""
        idx = set()
        for x in elements:
            if x not in self.index:
                raise ValueError(f"{x} is not an element of {self.name}")
            idx.add(self.index[x])
        ids = {self.class_of[i] for i in idx}
        if sum(len(self.classes[c]) for c in ids) != len(idx):
            raise ValueError("subset is not closed under conjugation")
        return self.normal_subset(ids)

    def classes_of_type(self, ct: CycleType) -> list[int]:
        if self.labels is None:
            raise ValueError(f"{self.name} is not a permutation group")
        return [cid for cid, lab in enumerate(self.labels) if lab == ct]

    def class_product(self, i: int, j: int) -> frozenset[int]:
        """Class ids making up C_i C_j (one representative of C_i against all of C_j)."""
        key = (i, j)
        hit = self._pair_cache.get(key)
        if hit is None:
            r = self.rep(i)
            mul, index, class_of, elements = self.mul, self.index, self.class_of, self.elements
            hit = frozenset(class_of[index[mul(r, elements[e])]] for e in self.classes[j])
            self._pair_cache[key] = hit
        return hit

    def to_json(self) -> dict:
        return {
            "version": CACHE_VERSION,
            "name": self.name,
            "meta": self.meta,
            "center_quotient": self.center_quotient,
            "elements": [list(e) for e in self.elements],
            "classes": [list(c) for c in self.classes],
        }


def _orbit_classes(elements: Sequence[Element], mul, gens: Sequence[Element],
                   identity: Element) -> list[list[int]]:
    """Conjugation orbits under the given generators (x -> g x g^-1)."""
    index = {e: i for i, e in enumerate(elements)}
    invs = [_inverse(g, mul, identity) for g in gens]
    seen = [False] * len(elements)
    classes = []
    for start in range(len(elements)):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for i in frontier:
                x = elements[i]
                for g, gi in zip(gens, invs):
                    j = index[mul(mul(g, x), gi)]
                    if not seen[j]:
                        seen[j] = True
                        orbit.append(j)
                        nxt.append(j)
            frontier = nxt
        classes.append(sorted(orbit))
    return _canonical_class_order(classes, index[identity])


def _canonical_class_order(classes: list[list[int]], identity_index: int) -> list[list[int]]:
    return sorted(classes, key=lambda c: (c[0] != identity_index, len(c), c[0]))


def _inverse(g: Element, mul, identity: Element) -> Element:
    prev, x = identity, g
    while x != identity:
        prev, x = x, mul(x, g)
    return prev


def _closure(gens: Sequence[Element], mul, identity: Element, limit: int) -> list[Element]:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise GuardExceeded(f"group order exceeds {limit}")
        frontier = nxt
    return sorted(seen)


def _check_degree(n: int) -> None:
    if not 1 <= n <= MAX_DEGREE:
        raise GuardExceeded(f"degree {n} outside the oracle range 1..{MAX_DEGREE}")


def build_symmetric(n: int) -> GroupSnapshot:
    """S_n with classes read off from cycle types."""
    _check_degree(n)
    elements = list(itertools.permutations(range(n)))
    by_type: dict[CycleType, list[int]] = {}
    for i, e in enumerate(elements):
        by_type.setdefault(perm_cycle_type(e), []).append(i)
    classes = _canonical_class_order(list(by_type.values()), 0)
    labels = [perm_cycle_type(elements[c[0]]) for c in classes]
    return GroupSnapshot(f"S{n}", elements, perm_mul, classes, labels, meta={"kind": "S", "n": n})


def _three_cycles(n: int) -> list[Element]:
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return gens


def build_alternating(n: int) -> GroupSnapshot:
    """A_n with classes found as conjugation orbits, so splitting is observed."""
    _check_degree(n)
    elements = [e for e in itertools.permutations(range(n)) if _is_even_perm(e)]
    identity = tuple(range(n))
    classes = _orbit_classes(elements, perm_mul, _three_cycles(n), identity)
    labels = [perm_cycle_type(elements[c[0]]) for c in classes]
    return GroupSnapshot(f"A{n}", elements, perm_mul, classes, labels, meta={"kind": "A", "n": n})


def matrix_group_order(kind: str, d: int, p: int) -> int:
    gl = math.prod(p**d - p**i for i in range(d))
    if kind == "GL":
        return gl
    sl = gl // (p - 1)
    if kind in ("SL", "Sp"):
        return sl
    return sl // math.gcd(d, p - 1)


def build_matrix_group(d: int, p: int, kind: str = "SL") -> GroupSnapshot:
    """GL(d,p), SL(d,p), Sp(2,p) (= SL(2,p)) or PSL(d,p), by closure from
    elementary generators; PSL elements are the lexicographically least
    multiple by a central scalar."""
    kind = {"SP": "Sp"}.get(kind.upper(), kind.upper())
    if kind not in ("SL", "GL", "Sp", "PSL"):
        raise ValueError(f"unknown matrix group kind {kind!r}")
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if not 1 <= d <= 3 or p > 7:
        raise GuardExceeded(f"matrix groups limited to d <= 3, p <= 7 (got d={d}, p={p})")
    if kind == "Sp" and d != 2:
        raise ValueError("only Sp(2, p) is supported")
    expected = matrix_group_order(kind, d, p)
    if expected > MAX_ORDER:
        raise GuardExceeded(f"|{kind}({d},{p})| = {expected} exceeds {MAX_ORDER}")
    identity = _identity_matrix(d)
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                m = list(identity)
                m[i * d + j] = 1
                gens.append(tuple(m))
    if kind == "GL":
        omega = next(w for w in range(1, p) if all(pow(w, k, p) != 1 for k in range(1, p - 1)))
        m = list(identity)
        m[0] = omega
        gens.append(tuple(m))
    mul = _mul_for(kind, (d, p))
    if kind == "PSL":
        canon = _psl_canon(d, p)
        gens = [canon(g) for g in gens]
        identity = canon(identity)
    if d == 1:
        gens = gens or [identity]
    elements = _closure(gens, mul, identity, MAX_ORDER)
    if len(elements) != expected:
        raise AssertionError(f"closure gave {len(elements)} elements, expected {expected}")
    classes = _orbit_classes(elements, mul, gens, identity)
    name = f"{kind}({d},{p})"
    return GroupSnapshot(name, elements, mul, classes, center_quotient=(kind == "PSL"),
                         meta={"kind": kind, "d": d, "p": p})


_GROUP_RE = re.compile(r"^\s*(S|A|GL|SL|PSL|Sp)\s*(?:(\d+)\s*|\(\s*(\d+)\s*,\s*(\d+)\s*\)|(\d)\s*\(\s*(\d+)\s*\))\s*$",
                       re.IGNORECASE)


def parse_group(text: str) -> tuple[str, tuple[int, ...]]:
    """``S5``, ``A6``, ``PSL(3,2)``, ``PSL2(7)``, ``SL(2,3)``, ``GL(3,2)``, ``Sp(2,5)``."""
    m = _GROUP_RE.match(text)
    if m is None:
        raise ParseError(f"unrecognised group {text!r}")
    kind = m.group(1).upper()
    kind = "Sp" if kind == "SP" else kind
    if m.group(2) is not None:
        if kind not in ("S", "A"):
            raise ParseError(f"matrix group {text!r} needs (d,p)")
        return kind, (int(m.group(2)),)
    if kind in ("S", "A"):
        raise ParseError(f"permutation group {text!r} takes a single degree")
    if m.group(3) is not None:
        return kind, (int(m.group(3)), int(m.group(4)))
    return kind, (int(m.group(5)), int(m.group(6)))


def _build_from_key(kind: str, params: tuple[int, ...]) -> GroupSnapshot:
    if kind == "S":
        return build_symmetric(params[0])
    if kind == "A":
        return build_alternating(params[0])
    return build_matrix_group(params[0], params[1], kind)


def _mul_for(kind: str, params: tuple[int, ...]):
    if kind in ("S", "A"):
        return perm_mul
    d, p = params
    base = mat_mul(d, p)
    if kind != "PSL":
        return base
    canon = _psl_canon(d, p)

    def mul(a, b):
        return canon(base(a, b))

    return mul


def _psl_canon(d: int, p: int):
    scalars = [lam for lam in range(1, p) if pow(lam, d, p) == 1]

    def canon(x: Element) -> Element:
        return min(tuple(lam * v % p for v in x) for lam in scalars)

    return canon


def build_group(text: str, cache_dir: str | Path | None = None) -> GroupSnapshot:
    """Build a group from its name, optionally through a JSON snapshot cache.

    The cache only saves time; a cached snapshot is identical to a fresh one.
    """
    kind, params = parse_group(text)
    if cache_dir is None:
        return _build_from_key(kind, params)
    path = Path(cache_dir) / f"{kind}_{'_'.join(map(str, params))}.json"
    if path.exists():
        data = json.loads(path.read_text())
        if data.get("version") == CACHE_VERSION:
            elements = [tuple(e) for e in data["elements"]]
            labels = None
            if kind in ("S", "A"):
                labels = [perm_cycle_type(elements[c[0]]) for c in data["classes"]]
            return GroupSnapshot(data["name"], elements, _mul_for(kind, params), data["classes"],
                                 labels, data["center_quotient"], data["meta"])
    g = _build_from_key(kind, params)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(g.to_json(), separators=(",", ":")))
    return g


# -- normal-subset arithmetic ----------------------------------------------

def _check_member(g: GroupSnapshot, *subsets: NormalSubset) -> None:
    for a in subsets:
        if a.group != g.name:
            raise ValueError(f"subset belongs to {a.group}, not {g.name}")


def product_set(g: GroupSnapshot, a1: NormalSubset, a2: NormalSubset) -> NormalSubset:
    """A1 A2 as a union of classes."""
    _check_member(g, a1, a2)
    ids: set[int] = set()
    for i in a1.class_ids:
        for j in a2.class_ids:
            ids |= g.class_product(i, j)
    return g.normal_subset(ids)


def product_set_naive(g: GroupSnapshot, a1: NormalSubset, a2: NormalSubset) -> set[Element]:
    """All pairwise products, element by element (for validation)."""
    _check_member(g, a1, a2)
    left = [g.elements[e] for c in a1.class_ids for e in g.classes[c]]
    right = [g.elements[e] for c in a2.class_ids for e in g.classes[c]]
    return {g.mul(x, y) for x in left for y in right}


def power_set(g: GroupSnapshot, a: NormalSubset, b: int) -> NormalSubset:
    out = a
    for _ in range(b - 1):
        out = product_set(g, out, a)
    return out


def covering_number(g: GroupSnapshot, a: NormalSubset, b_max: int = DEFAULT_COVERING_CAP) -> int | None:
    """Least b <= b_max with A^b = G, or None when no such b exists within the cap."""
    _check_member(g, a)
    if not a.class_ids or a.class_ids == {0}:
        raise ValueError("covering number needs a nontrivial normal subset")
    target = len(g.classes)
    cur = a
    for b in range(1, b_max + 1):
        if len(cur.class_ids) == target:
            return b
        nxt = product_set(g, cur, a)
        if nxt.class_ids == cur.class_ids:
            # A^b stuck on a proper union of classes: it never grows again
            return None
        cur = nxt
    return None


def largest_class_in(g: GroupSnapshot, a: NormalSubset) -> tuple[int, int]:
    _check_member(g, a)
    if not a.class_ids:
        raise ValueError("empty subset")
    cid = max(sorted(a.class_ids), key=lambda c: len(g.classes[c]))
    return cid, len(g.classes[cid])


@dataclass(frozen=True)
class BigClassVerdict:
    class_id: int
    max_class_size: int
    subset_size: int
    epsilon: Epsilon
    holds: bool  # m >= |A|^(1-eps)
    counting_holds: bool  # |A| <= m^(1+eps)


def bigclass_check(g: GroupSnapshot, a: NormalSubset, eps: Epsilon) -> BigClassVerdict:
    cid, m = largest_class_in(g, a)
    p, q = eps.p, eps.q
    return BigClassVerdict(cid, m, a.size, eps,
                           m**q >= a.size ** (q - p),
                           a.size**q <= m ** (q + p))


def class_count_profile(g: GroupSnapshot) -> dict[int, int]:
    """size -> number of classes of that size (c_i(G))."""
    return dict(sorted(Counter(g.class_sizes).items()))


def size_prop_check(g: GroupSnapshot, eps: Epsilon) -> list[tuple[int, int, bool]]:
    """For each class size m: (m, number of classes of size <= m, count <= m^eps)."""
    profile = class_count_profile(g)
    out = []
    running = 0
    for m, c in profile.items():
        running += c
        out.append((m, running, running**eps.q <= m**eps.p))
    return out


def eta_exact(g: GroupSnapshot, s=1, bits: int = DEFAULT_BITS) -> Interval:
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    return _neg_power_sum(g.class_sizes, s, bits)


@dataclass(frozen=True)
class StarContainment:
    type1: CycleType
    type2: CycleType
    star_type: CycleType
    contained: bool
    star_size_oracle: int
    star_size_formula: int

    @property
    def ok(self) -> bool:
        return self.contained and self.star_size_oracle == self.star_size_formula


def star_containment_check(g: GroupSnapshot, ct1: CycleType, ct2: CycleType) -> StarContainment:
    """Check (pi1 pi2')^{S_n} is inside C1 C2 with pi2' built on pi1's fixed points."""
    if g.meta.get("kind") != "S":
        raise ValueError("star containment needs a symmetric group snapshot")
    n = g.meta["n"]
    star = star_sym(ct1, ct2)  # raises SupportOverflow
    pi1 = _perm_of_type(ct1, range(n))
    moved = {i for i in range(n) if pi1[i] != i}
    pi2 = _perm_of_type(ct2, [i for i in range(n) if i not in moved])
    prod = perm_mul(pi1, pi2)
    star_cid = g.class_of_element(prod)
    (c1,) = g.classes_of_type(ct1)
    (c2,) = g.classes_of_type(ct2)
    return StarContainment(ct1, ct2, perm_cycle_type(prod),
                           star_cid in g.class_product(c1, c2) and perm_cycle_type(prod) == star,
                           len(g.classes[star_cid]), class_size_sym(star))


def _perm_of_type(ct: CycleType, points) -> Element:
    """A permutation of the given cycle type acting on ``points`` (moved first)."""
    points = list(points)
    n = ct.n
    p = list(range(n))
    pos = 0
    for length in ct.parts():
        if length == 1:
            continue
        cyc = points[pos:pos + length]
        if len(cyc) < length:
            raise ValueError("not enough free points")
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            p[x] = y
        pos += length
    return tuple(p)


@dataclass(frozen=True)
class KFoldVerdict:
    sizes: tuple[int, ...]
    product_size: int
    epsilon: Epsilon
    holds: bool


def kfold_expansion_check(g: GroupSnapshot, subsets: Sequence[NormalSubset], eps: Epsilon) -> KFoldVerdict:
    """|A_1 ... A_k| >= (|A_1| ... |A_k|)^(1-eps), products taken left to right."""
    if len(subsets) < 2:
        raise ValueError("need at least two subsets")
    if any(not a.class_ids for a in subsets):
        raise ValueError("subsets must be nonempty")
    prod = subsets[0]
    for a in subsets[1:]:
        prod = product_set(g, prod, a)
    sizes = tuple(a.size for a in subsets)
    rhs = math.prod(sizes)
    return KFoldVerdict(sizes, prod.size, eps, prod.size**eps.q >= rhs ** (eps.q - eps.p))

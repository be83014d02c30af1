"""Verification sweeps behind the acceptance criteria.

Each ``criterion_N`` returns a :class:`CriterionReport` whose records are
plain JSON-able dicts in a fixed order.  Work is fanned out with
``jobs`` worker processes, but results are always collected in input order,
so the serialized stream does not depend on ``jobs``.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from sympy.utilities.iterables import partitions

from . import classical_support as cs
from .cycle_types import (
    CycleType,
    alt_class_sizes,
    class_size_sym,
    enumerate_cycle_types,
    factorial,
)
from .group_oracle import (
    GroupSnapshot,
    bigclass_check,
    build_alternating,
    build_group,
    build_symmetric,
    covering_number,
    dominant_eigenspace_dim,
    power_set,
    star_containment_check,
    unipotent_blocks,
)
from .sym_expansion import (
    DEFAULT_BITS,
    Epsilon,
    class_sizes,
    stirling_class_lower,
    support_threshold,
    sym_class_bounds,
    term1_ratio,
    term3_lower,
)

__all__ = ["CriterionReport", "CRITERIA", "run_criterion", "pmap"]


@dataclass
class CriterionReport:
    number: int
    title: str
    records: list[dict] = field(default_factory=list)
    violations: int = 0
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def add(self, record: dict, checked: int = 1, violations: int = 0) -> None:
        self.records.append(record)
        self.checked += checked
        self.violations += violations

    def summary(self) -> dict:
        return {"criterion": self.number, "title": self.title, "checked": self.checked,
                "violations": self.violations, "passed": self.passed}

    def jsonl(self) -> str:
        lines = [json.dumps({"criterion": self.number, **r}, sort_keys=True) for r in self.records]
        lines.append(json.dumps({"summary": True, **self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def pmap(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """Ordered map, optionally across ``jobs`` processes."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _min_by_support(n: int) -> dict[int, tuple[int, int, int]]:
    """support -> (min size, max size, class count) over the classes of S_n."""
    out: dict[int, tuple[int, int, int]] = {}
    for ct in enumerate_cycle_types(n):
        size = class_size_sym(ct)
        s = ct.support
        lo, hi, cnt = out.get(s, (size, size, 0))
        out[s] = (min(lo, size), max(hi, size), cnt + 1)
    return dict(sorted(out.items()))


# -- 1: formula vs oracle class sizes ------------------------------------------

def _c1_degree(n: int) -> list[tuple[dict, int]]:
    rows = []
    sym = build_symmetric(n)
    for cid, ct in enumerate(sym.labels):
        oracle = len(sym.classes[cid])
        formula = class_size_sym(ct)
        rows.append(({"group": f"S{n}", "type": str(ct), "oracle": [oracle], "formula": [formula]},
                     int(oracle != formula)))
    alt = build_alternating(n)
    by_type: dict[CycleType, list[int]] = {}
    for cid, ct in enumerate(alt.labels):
        by_type.setdefault(ct, []).append(len(alt.classes[cid]))
    for ct in enumerate_cycle_types(n):
        if not ct.is_even:
            continue
        oracle = sorted(by_type.get(ct, []))
        formula = sorted(alt_class_sizes(ct))
        rows.append(({"group": f"A{n}", "type": str(ct), "oracle": oracle, "formula": formula},
                     int(oracle != formula)))
    return rows


def criterion_1(jobs: int = 1, max_n: int = 8) -> CriterionReport:
    rep = CriterionReport(1, "class sizes in S_n and A_n match the oracle, n <= 8")
    for rows in pmap(_c1_degree, range(1, max_n + 1), jobs):
        for rec, bad in rows:
            rep.add(rec, violations=bad)
    return rep


# -- 2: class equation ------------------------------------------------------------

def _c2_degree(n: int) -> dict:
    total = sum(class_size_sym(ct) for ct in enumerate_cycle_types(n))
    return {"n": n, "sum": total, "factorial": factorial(n)}


def criterion_2(jobs: int = 1, max_n: int = 30) -> CriterionReport:
    rep = CriterionReport(2, "sum of S_n class sizes equals n!, n <= 30")
    for rec in pmap(_c2_degree, range(1, max_n + 1), jobs):
        rep.add(rec, violations=int(rec["sum"] != rec["factorial"]))
    return rep


# -- 3 and 4: two-sided bounds and the Stirling lower bound ---------------------------

def _c3_degree(n: int) -> list[tuple[dict, int, int]]:
    rows = []
    for s, (lo, hi, cnt) in _min_by_support(n).items():
        b = sym_class_bounds(n, s)
        bad = int(not (b.lower <= lo and hi <= b.upper))
        rows.append(({"n": n, "s": s, "classes": cnt, "min_size": lo, "max_size": hi,
                      "lower": _frac(b.lower), "upper": _frac(b.upper)}, cnt, bad))
    return rows


def criterion_3(jobs: int = 1, max_n: int = 30) -> CriterionReport:
    rep = CriterionReport(3, "n!/((n-s)! 2^(s/2) (s/2)!) <= |C| <= n!/(n-s)!, n <= 30")
    for rows in pmap(_c3_degree, range(1, max_n + 1), jobs):
        for rec, cnt, bad in rows:
            rep.add(rec, checked=cnt, violations=bad)
    return rep


def _c4_degree(args: tuple[int, int]) -> list[tuple[dict, int, int]]:
    n, bits = args
    rows = []
    for s, (lo, _, cnt) in _min_by_support(n).items():
        bound = stirling_class_lower(n, s, bits)
        rows.append(({"n": n, "s": s, "classes": cnt, "min_size": lo, "stirling_lower": _frac(bound)},
                     cnt, int(bound > lo)))
    return rows


def criterion_4(jobs: int = 1, max_n: int = 30, bits: int = DEFAULT_BITS) -> CriterionReport:
    rep = CriterionReport(4, "|C| >= n^(s/2) e^(-s/2) / (4 sqrt(pi n)), n <= 30")
    for rows in pmap(_c4_degree, [(n, bits) for n in range(1, max_n + 1)], jobs):
        for rec, cnt, bad in rows:
            rep.add(rec, checked=cnt, violations=bad)
    return rep


# -- 5: the three term bounds - ---------------------------------------------------------

def _c5_term1(n: int) -> dict:
    checked = bad = 0
    for s1 in range(n // 3 + 1):
        for s2 in range(n // 3 + 1):
            checked += 1
            if term1_ratio(n, s1, s2) * 3**s1 < 1:
                bad += 1
    return {"check": "term1", "n": n, "checked": checked, "violations": bad}


def _moved_parts(n: int) -> list[tuple[dict[int, int], int]]:
    out = []
    for ct in enumerate_cycle_types(n):
        out.append(({i: c for i, c in ct.terms if i >= 2}, ct.support))
    return out


def _c5_term2(n: int) -> dict:
    types = _moved_parts(n)
    checked = bad = 0
    for c, s1 in types:
        for d, s2 in types:
            num = den = 1
            for i in c.keys() | d.keys():
                a, b = c.get(i, 0), d.get(i, 0)
                num *= factorial(a) * factorial(b)
                den *= factorial(a + b)
            # (num/den)^2 >= 2^-(s1+s2)
            checked += 1
            if num * num << (s1 + s2) < den * den:
                bad += 1
    return {"check": "term2", "n": n, "checked": checked, "violations": bad}


def _c5_term3(n: int) -> list[dict]:
    rows = []
    for s, (lo, _, cnt) in _min_by_support(n).items():
        if s < 2 or 2 * s > n:
            continue
        bound = term3_lower(n, s)
        rows.append({"check": "term3", "n": n, "s": s, "min_size": lo, "bound": bound,
                     "checked": cnt, "violations": int(lo < bound)})
    return rows


def _c5_task(task: tuple[str, int]) -> list[dict]:
    kind, n = task
    if kind == "term1":
        return [_c5_term1(n)]
    if kind == "term2":
        return [_c5_term2(n)]
    return _c5_term3(n)


def criterion_5(jobs: int = 1, term1_max: int = 60, term2_max: int = 20, term3_max: int = 30) -> CriterionReport:
    rep = CriterionReport(5, "term1 >= 3^-s1, term2 >= 2^-(s1+s2)/2, |C1| >= s1^(s1/2)")
    tasks = ([("term1", n) for n in range(1, term1_max + 1)]
             + [("term2", n) for n in range(1, term2_max + 1)]
             + [("term3", n) for n in range(1, term3_max + 1)])
    ordered = pmap(_c5_task, tasks, jobs)
    for rows in ordered:
        for rec in rows:
            rep.add(rec, checked=rec["checked"], violations=rec["violations"])
    return rep


# -- 6: support threshold ---------------------------------------------------------------

def _c6_task(task: tuple[int, bool]) -> dict:
    n, alt = task
    bad = support_threshold(n, alternating=alt)
    return {"group": f"{'A' if alt else 'S'}{n}", "n": n, "violating_types": [str(t) for t in bad]}


def criterion_6(jobs: int = 1, sym_range=(40, 60), alt_range=(45, 60)) -> CriterionReport:
    rep = CriterionReport(6, "|C|^8 <= |G| implies s <= n/3 (S_n n>=40, A_n n>=45, up to 60)")
    tasks = [(n, False) for n in range(sym_range[0], sym_range[1] + 1)]
    tasks += [(n, True) for n in range(alt_range[0], alt_range[1] + 1)]
    for rec in pmap(_c6_task, tasks, jobs):
        rep.add(rec, checked=1, violations=len(rec["violating_types"]))
    return rep


# -- 7: star containment ----------------------------------------------------------------

def _c7_degree(n: int) -> dict:
    g = build_symmetric(n)
    types = list(enumerate_cycle_types(n))
    checked = 0
    bad = []
    for t1 in types:
        for t2 in types:
            if t1.support + t2.support > n:
                continue
            checked += 1
            r = star_containment_check(g, t1, t2)
            if not r.ok:
                bad.append([str(t1), str(t2)])
    return {"n": n, "pairs": checked, "failures": bad}


def criterion_7(jobs: int = 1, max_n: int = 7) -> CriterionReport:
    rep = CriterionReport(7, "C1*C2 is a class inside C1C2 of the predicted size, n <= 7")
    for rec in pmap(_c7_degree, range(1, max_n + 1), jobs):
        rep.add(rec, checked=rec["pairs"], violations=len(rec["failures"]))
    return rep


# -- 8: g = f + odd, h = f - odd --------------------------------------------------------

def _f_by_min(blocks: dict[int, int]) -> int:
    # independent form of f: sum over ordered block pairs of min(i, j)
    return sum(min(i, j) * ni * nj for i, ni in blocks.items() for j, nj in blocks.items())


def _c8_size(m: int) -> dict:
    checked = bad = 0
    for p in partitions(m):
        blocks = dict(p)
        odd = sum(c for i, c in blocks.items() if i % 2)
        f = cs.exponent_f(blocks)
        checked += 1
        if (f != _f_by_min(blocks) or cs.exponent_g(blocks) != f + odd
                or cs.exponent_h(blocks) != f - odd):
            bad += 1
    return {"dimension": m, "block_multisets": checked, "violations": bad}


def criterion_8(jobs: int = 1, max_dim: int = 40) -> CriterionReport:
    rep = CriterionReport(8, "g = f + sum_odd n_i and h = f - sum_odd n_i, sum i n_i <= 40")
    for rec in pmap(_c8_size, range(1, max_dim + 1), jobs):
        rep.add(rec, checked=rec["block_multisets"], violations=rec["violations"])
    return rep


# -- 9: GL centralizer orders -------------------------------------------------------------

def _c9_group(args: tuple[int, int]) -> list[dict]:
    d, q = args
    g = build_group(f"GL({d},{q})")
    rows = []
    for cid in range(len(g.classes)):
        blocks = unipotent_blocks(g.rep(cid), d, q)
        if blocks is None:
            continue
        cent = g.order // len(g.classes[cid])
        f = cs.exponent_f(blocks)
        # q^f prod_{j<=d} (1 - q^-j) <= cent <= q^f, cleared of denominators
        lower_ok = q**f * math.prod(q**j - 1 for j in range(1, d + 1)) <= cent * q ** (d * (d + 1) // 2)
        upper_ok = cent <= q**f
        rows.append({"group": g.name, "blocks": " ".join(f"{i}^{c}" for i, c in sorted(blocks.items(), reverse=True)),
                     "centralizer": cent, "f": f, "ok": lower_ok and upper_ok})
    return rows


def criterion_9(jobs: int = 1) -> CriterionReport:
    rep = CriterionReport(9, "unipotent centralizers in GL_2, GL_3 over F_2, F_3 lie in [q^f prod(1-q^-j), q^f]")
    for rows in pmap(_c9_group, [(2, 2), (3, 2), (2, 3), (3, 3)], jobs):
        for rec in rows:
            rep.add(rec, violations=int(not rec["ok"]))
    return rep


# -- 10: class-size exponents in small PSLs ---------------------------------------------

def _power_le(q: int, e: Fraction, x: int) -> bool:
    """q^e <= x for rational e and positive integers."""
    e = Fraction(e)
    if e.numerator >= 0:
        return q**e.numerator <= x**e.denominator
    return 1 <= x**e.denominator * q ** (-e.numerator)


def _le_power(x: int, q: int, e: Fraction) -> bool:
    """x <= q^e for rational e and positive integers."""
    e = Fraction(e)
    if e.numerator >= 0:
        return x**e.denominator <= q**e.numerator
    return x**e.denominator * q ** (-e.numerator) <= 1


SLACK = 3


def _c10_group(args: tuple[int, int]) -> list[dict]:
    d, q = args
    g = build_group(f"PSL({d},{q})")
    spec = cs.ClassicalGroupSpec(cs.Family.LINEAR, d, q)
    rows = []
    for cid in range(len(g.classes)):
        size = len(g.classes[cid])
        m = dominant_eigenspace_dim(g.rep(cid), d, q)
        rec = {"group": g.name, "class": cid, "size": size}
        if 2 * m <= d:
            rows.append({**rec, "support": None, "checked": False})
            continue
        s = d - m
        iv = cs.class_size_exponents(spec, s)
        ok = _power_le(q, iv.lo - SLACK, size) and _le_power(size, q, iv.hi + SLACK)
        rows.append({**rec, "support": s, "lo": _frac(iv.lo), "hi": _frac(iv.hi), "slack": SLACK,
                     "checked": True, "ok": ok})
    return rows


def criterion_10(jobs: int = 1) -> CriterionReport:
    rep = CriterionReport(10, "log_q |x^G| in [2as(n-s-1) - 3, as(2n-s+1) + 3] in PSL_2(5), PSL_2(7), PSL_3(2)")
    for rows in pmap(_c10_group, [(2, 5), (2, 7), (3, 2)], jobs):
        for rec in rows:
            if rec["checked"]:
                rep.add(rec, violations=int(not rec["ok"]))
            else:
                rep.add(rec, checked=0)
    return rep


# -- 11: support additivity of the classical star ----------------------------------------

def random_descriptor(rng: random.Random, n: int, s: int) -> cs.JordanDescriptor:
    """A random descriptor of dimension n and support s (needs 2s <= n)."""
    k = rng.randint(0, s)
    rest = s - k  # = sum (i-1) n_i over blocks of size >= 2
    blocks: dict[int, int] = {}
    while rest:
        step = rng.randint(1, rest)  # one block of size step+1
        blocks[step + 1] = blocks.get(step + 1, 0) + 1
        rest -= step
    used = k + sum(i * c for i, c in blocks.items())
    blocks[1] = n - used
    tag = rng.choice([cs.EigenTag.PLUS_ONE, cs.EigenTag.MINUS_ONE])
    return cs.JordanDescriptor.make(blocks, k, tag)


def _c11_chunk(args: tuple[int, int]) -> dict:
    seed, count = args
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        n = rng.randint(5, 400)
        smax = (n - 1) // 4  # s < n/4
        s1, s2 = rng.randint(0, smax), rng.randint(0, smax)
        x1, x2 = random_descriptor(rng, n, s1), random_descriptor(rng, n, s2)
        y = cs.star_classical(x1, x2, n)
        if y.n != n or y.support != s1 + s2 or y.support != n - (y.t + y.r):
            bad += 1
    return {"seed": seed, "pairs": count, "violations": bad}


def criterion_11(jobs: int = 1, pairs: int = 10_000, chunks: int = 10, seed: int = 20240) -> CriterionReport:
    rep = CriterionReport(11, "nu(x1*x2) = nu(x1) + nu(x2) on random descriptor pairs")
    per = pairs // chunks
    tasks = [(seed + i, per + (1 if i < pairs % chunks else 0)) for i in range(chunks)]
    for rec in pmap(_c11_chunk, tasks, jobs):
        rep.add(rec, checked=rec["pairs"], violations=rec["violations"])
    return rep


# -- 12: covering numbers and big classes ------------------------------------------------

def _c12_group(name: str) -> list[dict]:
    g = build_group(name)
    rows = []
    for cid in range(1, len(g.classes)):
        a = g.normal_subset([cid])
        b = covering_number(g, a)
        confirmed = b is not None and power_set(g, a, b).size == g.order
        rows.append({"task": "covering", "group": g.name, "class": cid, "size": a.size,
                     "b": b, "ok": confirmed and b <= 20})
    if name == "A5":
        eps = Epsilon(1, 2)
        ids = range(len(g.classes))
        for mask in range(1, 1 << len(g.classes)):
            a = g.normal_subset(i for i in ids if mask >> i & 1)
            v = bigclass_check(g, a, eps)
            rows.append({"task": "bigclass", "group": g.name, "classes": sorted(a.class_ids),
                         "subset_size": a.size, "max_class": v.max_class_size, "ok": v.holds})
    return rows


def criterion_12(jobs: int = 1) -> CriterionReport:
    rep = CriterionReport(12, "covering numbers <= 20 in A5, A6, PSL_2(7); big classes in A5 normal subsets")
    for rows in pmap(_c12_group, ["A5", "A6", "PSL(2,7)"], jobs):
        for rec in rows:
            rep.add(rec, violations=int(not rec["ok"]))
    return rep


CRITERIA: dict[int, Callable[..., CriterionReport]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}


def run_criterion(number: int, jobs: int = 1) -> CriterionReport:
    return CRITERIA[number](jobs=jobs)

import math
from fractions import Fraction

import mpmath
import pytest

from classexpand import CycleType, Epsilon
from classexpand.cycle_types import class_size_sym, enumerate_cycle_types
from classexpand.group_oracle import build_symmetric
from classexpand.sym_expansion import (
    class_count_at_most,
    count_within_power,
    eta_sym,
    expansion_verdict,
    power_at_least,
    stirling_bounds,
    stirling_class_lower,
    support_threshold,
    sym_class_bounds,
    term1_ratio,
    term2_ratio,
    term3_lower,
)


def T(text, n):
    return CycleType.parse(text, n)


def mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


def test_epsilon_parsing():
    assert Epsilon.parse("1/2") == Epsilon(1, 2)
    assert Epsilon.parse("2/4") == Epsilon(1, 2)
    for bad in ("0.5", "1/1", "0/3", "3/2", "a/b"):
        with pytest.raises(ValueError):
            Epsilon.parse(bad)


def test_power_at_least():
    assert power_at_least(15, 100, Fraction(1, 2))
    assert not power_at_least(9, 100, Fraction(1, 2))
    assert power_at_least(10, 100, Fraction(1, 2))


def test_sym_class_bounds_examples():
    b = sym_class_bounds(5, 4)
    assert (b.lower, b.upper) == (15, 120)
    b = sym_class_bounds(5, 0)
    assert (b.lower, b.upper) == (1, 1)
    b = sym_class_bounds(5, 5)
    assert b.upper == 120
    g = build_symmetric(5)
    for cid, lab in enumerate(g.labels):
        if lab.support == 5:
            assert len(g.classes[cid]) in b
    with pytest.raises(ValueError):
        sym_class_bounds(5, 1)


def test_lower_bound_is_attained_by_double_transposition():
    assert sym_class_bounds(5, 4).lower == class_size_sym(T("2^2", 5))


def test_stirling_bounds_examples():
    b = stirling_bounds(1)
    assert 0.92 < b.lower < 0.923 and 1.843 < b.upper < 1.845
    assert b.lower <= 1 <= b.upper
    b = stirling_bounds(5)
    assert 118.0 < b.lower < 118.1 and 236.0 < b.upper < 236.1
    b = stirling_bounds(30)
    assert b.lower <= math.factorial(30) <= b.upper


def test_stirling_class_lower_values():
    mpmath.mp.prec = 200
    for n, s in ((5, 4), (40, 0), (9, 6), (30, 17)):
        v = stirling_class_lower(n, s)
        exact = mpmath.mpf(n) ** (mpmath.mpf(s) / 2) * mpmath.e ** (-mpmath.mpf(s) / 2) / (4 * mpmath.sqrt(mpmath.pi * n))
        assert mp(v) <= exact
        assert exact - mp(v) < mpmath.mpf(2) ** -50 * max(1, exact)
    assert 0.2134 < stirling_class_lower(5, 4) < 0.2135 <= 15
    assert 0.0223 < stirling_class_lower(40, 0) < 0.0224
    min6 = min(class_size_sym(ct) for ct in enumerate_cycle_types(9) if ct.support == 6)
    assert stirling_class_lower(9, 6) <= min6


def test_term1_examples():
    assert term1_ratio(9, 3, 3) == Fraction(5, 21) == Fraction(518400, 2177280)
    assert term1_ratio(9, 0, 3) == 1
    assert term1_ratio(30, 10, 10) >= Fraction(1, 3**10)
    with pytest.raises(ValueError):
        term1_ratio(9, 4, 1)


def test_term2_examples():
    assert term2_ratio(T("2", 4), T("2", 4)) == Fraction(1, 2)
    assert term2_ratio(T("3^2", 15), CycleType.identity(15)) == 1
    r = term2_ratio(T("3^2", 15), T("3^3", 15))
    assert r == Fraction(1, 10)
    assert r**2 >= Fraction(1, 2**15)


def test_term3_examples():
    assert term3_lower(8, 4) == 16 <= class_size_sym(T("2^2", 8)) == 210
    assert term3_lower(4, 2) == 2 <= class_size_sym(T("2", 4)) == 6
    assert term3_lower(32, 16) == 4294967296
    assert term3_lower(10, 3) == 6  # ceil(3^1.5) = ceil(5.196...)
    with pytest.raises(ValueError):
        term3_lower(6, 4)


def test_term3_min_class_size_support_16_in_s32():
    least = min(class_size_sym(ct) for ct in enumerate_cycle_types(32) if ct.support == 16)
    assert term3_lower(32, 16) <= least


def test_support_threshold_examples():
    assert support_threshold(40) == []
    assert support_threshold(45, alternating=True) == []


def test_support_threshold_agrees_with_direct_check():
    for n, alt in ((12, False), (14, True), (20, False)):
        order = math.factorial(n) // (2 if alt else 1)
        expect = []
        for ct in enumerate_cycle_types(n):
            if alt and not ct.is_even:
                continue
            size = class_size_sym(ct)
            if alt and n > 1 and all(i % 2 and c == 1 for i, c in ct.terms):
                size //= 2
            if size**8 <= order and 3 * ct.support > n:
                expect.append(ct)
        assert support_threshold(n, alternating=alt) == expect


def test_expansion_verdict_examples():
    t = T("2", 5)
    v = expansion_verdict(5, t, t, Epsilon(1, 2))
    assert (v.size1, v.size2, v.star_size, v.holds) == (10, 10, 15, True)
    for ct in enumerate_cycle_types(6):
        if ct.is_identity:
            continue
        v = expansion_verdict(6, ct, CycleType.identity(6), Epsilon(1, 100))
        assert v.star_size == v.size1 and v.holds


def test_expansion_verdict_n100():
    ct = T("2^2", 100)
    v = expansion_verdict(100, ct, ct, Epsilon(1, 10))
    assert v.record() == {
        "n": 100, "type1": "2^2 1^96", "type2": "2^2 1^96", "size1": 11763675, "size2": 11763675,
        "star_size": 19539228901500, "epsilon": "1/10", "verdict": True,
    }


def test_expansion_monotone_in_epsilon():
    eps = [Epsilon.of(Fraction(k, 20)) for k in range(1, 20)]
    types = [ct for ct in enumerate_cycle_types(8) if 0 < ct.support <= 4]
    for a in types:
        for b in types:
            vs = [expansion_verdict(8, a, b, e).holds for e in eps]
            assert vs == sorted(vs)


def test_eta_examples():
    assert eta_sym(4).lo == eta_sym(4).hi == Fraction(43, 24)
    assert eta_sym(1).lo == 1
    assert eta_sym(5).lo == sum(Fraction(1, x) for x in (1, 10, 15, 20, 20, 30, 24))


def test_eta_at_least_one():
    for n in range(1, 21):
        iv = eta_sym(n, Fraction(3, 2))
        assert iv.lo >= 1 and (n == 1 or iv.lo > 1)
        assert eta_sym(n, 2).lo > 1 or n == 1


def test_eta_fractional_encloses():
    mpmath.mp.prec = 200
    iv = eta_sym(6, Fraction(1, 2))
    exact = sum(mpmath.mpf(class_size_sym(ct)) ** -0.5 for ct in enumerate_cycle_types(6))
    assert mp(iv.lo) <= exact <= mp(iv.hi)


def test_class_counts():
    assert class_count_at_most(5, 1) == 1
    assert class_count_at_most(5, 20) == 5
    assert class_count_at_most(30, 10**6) == 5
    assert count_within_power(5, 25, Epsilon(1, 2))
    assert not count_within_power(6, 25, Epsilon(1, 2))

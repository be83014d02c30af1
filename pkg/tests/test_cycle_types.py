import math

import pytest
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup
from sympy.utilities.iterables import partitions

from classexpand import (
    CycleType,
    ParseError,
    SplitPair,
    SupportOverflow,
    class_size_alt,
    class_size_sym,
    enumerate_cycle_types,
    star_sym,
    support,
)
from classexpand.cycle_types import alt_class_total, splits_in_alternating


def T(text, n):
    return CycleType.parse(text, n)


def test_enumerate_counts():
    assert len(list(enumerate_cycle_types(4))) == 5
    assert [ct.as_dict() for ct in enumerate_cycle_types(1)] == [{1: 1}]
    assert len(list(enumerate_cycle_types(8))) == 22
    # independent partition count
    for n in range(1, 25):
        assert len(list(enumerate_cycle_types(n))) == sum(1 for _ in partitions(n))


def test_enumerate_order_is_reverse_lex():
    got = [str(ct) for ct in enumerate_cycle_types(4)]
    assert got == ["4^1", "3^1 1^1", "2^2", "2^1 1^2", "1^4"]


def test_support_examples():
    assert support(CycleType.identity(7)) == 0
    assert support(T("3 1^3", 6)) == 3
    assert support(T("2^2 1", 5)) == 4


def test_support_one_never_occurs():
    for n in range(1, 15):
        assert all(ct.support != 1 for ct in enumerate_cycle_types(n))


def test_class_size_sym_examples():
    assert class_size_sym(T("2^2 1", 5)) == 15
    assert class_size_sym(T("2 1^2", 4)) == 6
    for n in (1, 7, 30):
        assert class_size_sym(CycleType.identity(n)) == 1


def test_class_size_sym_matches_textbook_formula():
    for n in range(1, 16):
        for ct in enumerate_cycle_types(n):
            den = math.prod(i**c * math.factorial(c) for i, c in ct.terms)
            assert class_size_sym(ct) == math.factorial(n) // den


def test_class_size_alt_examples():
    assert class_size_alt(T("5", 5)) == SplitPair(12, 12)
    assert class_size_alt(T("2^2 1", 5)) == 15


def test_a3_three_cycles_split():
    # confirmed against the brute-force oracle in test_group_oracle
    assert class_size_alt(T("3", 3)) == SplitPair(1, 1)


def test_a1_identity_does_not_split():
    assert class_size_alt(CycleType.identity(1)) == 1
    assert not splits_in_alternating(CycleType.identity(1))


def test_class_size_alt_rejects_odd():
    with pytest.raises(ValueError):
        class_size_alt(T("2", 4))


def test_class_equation():
    for n in range(1, 31):
        assert sum(class_size_sym(ct) for ct in enumerate_cycle_types(n)) == math.factorial(n)
        even = [ct for ct in enumerate_cycle_types(n) if ct.is_even]
        assert sum(alt_class_total(ct) for ct in even) == (math.factorial(n) // 2 if n > 1 else 1)


@pytest.mark.parametrize("n", range(2, 8))
def test_sizes_against_sympy(n):
    sym = sorted(len(c) for c in SymmetricGroup(n).conjugacy_classes())
    assert sorted(class_size_sym(ct) for ct in enumerate_cycle_types(n)) == sym
    alt = sorted(len(c) for c in AlternatingGroup(n).conjugacy_classes())
    ours = []
    for ct in enumerate_cycle_types(n):
        if ct.is_even:
            r = class_size_alt(ct)
            ours.extend([r.first, r.second] if isinstance(r, SplitPair) else [r])
    assert sorted(ours) == alt


def test_star_examples():
    t = T("2 1^3", 5)
    assert star_sym(t, t) == T("2^2 1", 5)
    for ct in enumerate_cycle_types(6):
        assert star_sym(ct, CycleType.identity(6)) == ct
    assert star_sym(T("3 1^6", 9), T("2^2 1^5", 9)) == T("3 2^2 1^2", 9)


def test_star_overflow():
    with pytest.raises(SupportOverflow):
        star_sym(T("3 1", 4), T("2 1^2", 4))


def test_star_commutative_associative_additive():
    n = 10
    types = [ct for ct in enumerate_cycle_types(n) if ct.support <= 5]
    for a in types:
        for b in types:
            if a.support + b.support > n:
                continue
            ab = star_sym(a, b)
            assert ab == star_sym(b, a)
            assert ab.support == a.support + b.support
            for c in types[:12]:
                if ab.support + c.support <= n:
                    assert star_sym(ab, c) == star_sym(a, star_sym(b, c))


def test_parse_and_format():
    ct = CycleType.parse("3 2^2 1^2")
    assert ct.n == 9 and str(ct) == "3^1 2^2 1^2"
    assert CycleType.parse("3^1 2^2 1^2") == ct
    assert CycleType.parse("2^2", 7) == CycleType.parse("2^2 1^3")
    assert CycleType.parse(str(ct)) == ct


@pytest.mark.parametrize("text,pos", [
    ("0^2", 0),
    ("3 2^0", 2),
    ("2 3 2", 4),
    ("-1", 0),
    ("3 x", 2),
    ("", 0),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        CycleType.parse(text)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


def test_parse_degree_too_large():
    with pytest.raises(ParseError):
        CycleType.parse("3 3", 5)

"""Randomized properties over cycle types, exponents and oracle products."""

import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from classexpand import CycleType, Epsilon
from classexpand import classical_support as cs
from classexpand.cycle_types import class_size_sym, star_sym
from classexpand.group_oracle import build_group, product_set
from classexpand.sym_expansion import expansion_verdict, sym_class_bounds


@st.composite
def cycle_types(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    parts, left = [], n
    while left:
        k = draw(st.integers(1, left))
        parts.append(k)
        left -= k
    return CycleType.from_parts(parts)


@st.composite
def type_pairs(draw):
    a = draw(cycle_types())
    left = a.mult(1)
    parts = []
    while left:
        k = draw(st.integers(1, left))
        parts.append(k)
        left -= k
    b = CycleType.from_parts(parts, a.n) if parts else CycleType.identity(a.n)
    return a, b


@given(cycle_types())
def test_parse_roundtrip(ct):
    assert CycleType.parse(str(ct)) == ct
    assert CycleType.parse(str(ct), ct.n) == ct


@given(cycle_types())
def test_size_within_bounds(ct):
    if ct.support != 1:
        assert class_size_sym(ct) in sym_class_bounds(ct.n, ct.support)


@given(cycle_types())
def test_size_divides_factorial(ct):
    assert math.factorial(ct.n) % class_size_sym(ct) == 0


@given(type_pairs())
def test_star_support_additive(pair):
    a, b = pair
    s = star_sym(a, b)
    assert s.support == a.support + b.support
    assert star_sym(b, a) == s


@given(type_pairs(), st.fractions(0, 1, max_denominator=50), st.fractions(0, 1, max_denominator=50))
def test_verdict_monotone(pair, e1, e2):
    a, b = pair
    if a.is_identity or b.is_identity or 0 in (e1, e2) or 1 in (e1, e2):
        return
    small, big = sorted((e1, e2))
    if expansion_verdict(a.n, a, b, Epsilon.of(small)).holds:
        assert expansion_verdict(a.n, a, b, Epsilon.of(big)).holds


@given(st.dictionaries(st.integers(1, 8), st.integers(1, 5), min_size=1, max_size=5))
def test_exponent_relations(blocks):
    f = cs.exponent_f(blocks)
    odd = sum(c for i, c in blocks.items() if i % 2)
    even = sum(c for i, c in blocks.items() if i % 2 == 0)
    assert cs.exponent_g(blocks) - f == odd == f - cs.exponent_h(blocks)
    assert cs.exponent_g_prime_range(blocks) == (f + odd, f + odd + 2 * even)


@given(st.integers(16, 200), st.data())
def test_classical_star_additive(n, data):
    s1 = data.draw(st.integers(0, (n - 1) // 4))
    s2 = data.draw(st.integers(0, (n - 1) // 4))

    def draw_desc(s):
        blocks, left = {}, s
        while left:
            i = data.draw(st.integers(2, left + 1))
            blocks[i] = blocks.get(i, 0) + 1
            left -= i - 1
        moved = sum(i * c for i, c in blocks.items())
        blocks[1] = n - moved
        return cs.JordanDescriptor.make(blocks)

    x1, x2 = draw_desc(s1), draw_desc(s2)
    assert (x1.support, x2.support) == (s1, s2)
    y = cs.star_classical(x1, x2, n)
    assert y.support == s1 + s2 and y.n == n


_A6 = build_group("A6")


@settings(max_examples=60)
@given(st.sets(st.integers(0, 6), min_size=1), st.sets(st.integers(0, 6), min_size=1))
def test_oracle_product_symmetric_size(x, y):
    a, b = _A6.normal_subset(x), _A6.normal_subset(y)
    assert product_set(_A6, a, b).size == product_set(_A6, b, a).size

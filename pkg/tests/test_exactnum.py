import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicemax.exactnum import ONE, ZERO, PowerValue, iroot, max_power_value


def test_iroot_small():
    assert iroot(0, 3) == 0
    assert iroot(1, 5) == 1
    assert iroot(26, 3) == 2
    assert iroot(27, 3) == 3
    assert iroot(10**18, 2) == 10**9


@given(st.integers(min_value=0, max_value=10**24), st.integers(min_value=1, max_value=7))
@settings(max_examples=200, derandomize=True)
def test_iroot_floor_property(n, k):
    r = iroot(n, k)
    assert r**k <= n < (r + 1) ** k


def test_canonicalization():
    assert PowerValue(1, {9: Fraction(-1, 2)}) == Fraction(1, 3)
    assert PowerValue(2, {4: Fraction(-1, 2)}).as_fraction() == 1
    assert PowerValue(1, {8: Fraction(2)}).as_fraction() == 64
    v = PowerValue(1, {3: Fraction(-1, 2)})
    v2 = v * v
    assert v2.as_fraction() == Fraction(1, 3)


def test_zero_and_one():
    assert not ZERO
    assert ONE == 1
    assert ZERO * PowerValue(5, {7: Fraction(1, 2)}) == 0


def test_negative_coeff_rejected():
    with pytest.raises(ValueError):
        PowerValue(-1)


def test_irrational_as_fraction_raises():
    with pytest.raises(ValueError):
        PowerValue(1, {2: Fraction(-1, 2)}).as_fraction()


def test_compare_known_radicals():
    # 1/sqrt(2) > 1/sqrt(3) > 1/2
    a = PowerValue(1, {2: Fraction(-1, 2)})
    b = PowerValue(1, {3: Fraction(-1, 2)})
    assert a > b
    assert b > Fraction(1, 2)
    assert a < 1


@given(
    st.integers(min_value=1, max_value=50),
    st.integers(min_value=1, max_value=50),
    st.integers(min_value=2, max_value=40),
    st.integers(min_value=2, max_value=40),
    st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=8),
    st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=8),
)
@settings(max_examples=300, derandomize=True, deadline=None)
def test_compare_matches_high_precision_floats(c1, c2, b1, b2, e1, e2):
    v1 = PowerValue(c1, {b1: e1})
    v2 = PowerValue(c2, {b2: e2})
    f1 = c1 * math.pow(b1, float(e1))
    f2 = c2 * math.pow(b2, float(e2))
    cmp = v1.compare(v2)
    if abs(f1 - f2) > 1e-6 * max(f1, f2):
        assert cmp == (1 if f1 > f2 else -1)
    # exact antisymmetry regardless
    assert cmp == -v2.compare(v1)


def test_multiplication_merges_bases():
    a = PowerValue(2, {5: Fraction(-1, 2)})
    b = PowerValue(3, {5: Fraction(-3, 2)})
    prod = a * b
    assert prod.as_fraction() == Fraction(6, 25)


def test_max_power_value_first_wins_ties():
    a = PowerValue(1, {4: Fraction(-1, 2)})  # = 1/2
    b = PowerValue(Fraction(1, 2))
    assert max_power_value([a, b]) is a


def test_exact_str_stable():
    assert PowerValue(Fraction(3, 4)).exact_str() == "3/4"
    s = PowerValue(2, {3: Fraction(-1, 2)}).exact_str()
    assert s == "2*3^(-1/2)"

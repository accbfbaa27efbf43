import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seshadri.radicals import (
    Ordering,
    Radical,
    cmp_witness,
    compare_roots,
    floor_scaled,
    iroot,
    rad_cmp,
    rad_new,
    rad_scale,
    rad_to_decimal,
    root_of,
)


def test_new_folds_perfect_square():
    r = rad_new(1, 4, 2)
    assert (r.coeff, r.radicand, r.index) == (2, 1, 1)


def test_new_keeps_cube_free_radicand():
    r = rad_new(Fraction(1, 3), 18, 3)
    assert (r.coeff, r.radicand, r.index) == (Fraction(1, 3), 18, 3)


def test_new_folds_perfect_cube():
    r = rad_new(1, 8, 3)
    assert (r.coeff, r.radicand, r.index) == (2, 1, 1)


def test_partial_extraction_and_index_reduction():
    assert Radical(1, 24, 3) == Radical(2, 3, 3)
    assert Radical(1, 4, 4) == Radical(1, 2, 2)
    assert Radical(1, 36, 4) == Radical(1, 6, 2)


def test_large_prime_cofactor_power():
    p = 1_000_003  # above the trial-division bound
    r = Radical(1, 5 * p**3, 3)
    assert (r.coeff, r.radicand, r.index) == (p, 5, 3)


@pytest.mark.parametrize("bad", [(0, 2, 2), (-1, 2, 2), (1, 0, 2), (1, 2, 0)])
def test_new_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        rad_new(*bad)


def test_cmp_ppav3_witness():
    w = compare_roots(18, 3, 6, 2)
    assert w.ordering is Ordering.GREATER
    assert str(w) == "18² = 324 > 6³ = 216"
    assert rad_cmp(root_of(18, 3), root_of(6, 2)) is Ordering.GREATER


def test_cmp_ppav4_witness():
    w = compare_roots(72, 4, 24, 3)
    assert w.ordering is Ordering.GREATER
    assert (w.left, w.right) == (373248, 331776)
    assert rad_cmp(root_of(72, 4), root_of(24, 3)) is Ordering.GREATER


def test_cmp_reflexive():
    x = Radical(Fraction(5, 7), 12, 5)
    assert rad_cmp(x, x) is Ordering.EQUAL


def test_scale_examples():
    x = root_of(18, 3)
    assert rad_scale(x, Fraction(1, 3)) == Radical(Fraction(1, 3), 18, 3)
    assert rad_scale(x, 1) is x
    assert rad_scale(Radical(2, 5, 2), Fraction(3, 2)) == Radical(3, 5, 2)


@pytest.mark.parametrize("q", [0, -2, Fraction(-1, 3)])
def test_scale_rejects_non_positive(q):
    with pytest.raises(ValueError):
        rad_scale(Radical(2), q)


def test_decimal_examples():
    assert rad_to_decimal(Radical(Fraction(1, 3), 18, 3), 4) == "0.8736"
    assert rad_to_decimal(Radical(Fraction(4, 3)), 4) == "1.3333"
    assert rad_to_decimal(Radical(1, 2, 2), 5) == "1.41421"


def test_decimal_marks_irrational_values():
    assert rad_to_decimal(Radical(1, 2, 2), 3, mark=True) == "~1.414"
    assert rad_to_decimal(Radical(Fraction(3, 2)), 3, mark=True) == "1.500"


def test_decimal_against_mpmath():
    mpmath.mp.dps = 60
    for r in (Radical(Fraction(7, 3), 10, 3), Radical(1, 2, 2), Radical(Fraction(1, 4), 14 * 2, 2)):
        want = mpmath.nstr(mpmath.mpf(r.coeff.numerator) / r.coeff.denominator * mpmath.root(r.radicand, r.index), 25)
        got = rad_to_decimal(r, 20)
        assert got[:18] == want[: len(got)][:18]


def test_witness_on_normal_forms():
    w = cmp_witness(Radical(Fraction(1, 3), 18, 3), Radical(1))
    assert w.ordering is Ordering.LESS
    assert w.power == 3


def test_floor_scaled():
    assert floor_scaled(Radical(1, 2, 2), 1000) == 1414
    assert floor_scaled(Radical(3), 7) == 21


def test_iroot():
    assert iroot(10**30, 3) == 10**10
    assert iroot(10**30 - 1, 3) == 10**10 - 1
    assert iroot(0, 5) == 0


# ---------------------------------------------------------------- properties

coeffs = st.fractions(min_value=Fraction(1, 1000), max_value=1000).filter(lambda q: q > 0)
radicals = st.builds(Radical, coeffs, st.integers(1, 10**6), st.integers(1, 7))


@given(radicals, radicals)
def test_trichotomy_and_antisymmetry(a, b):
    o = rad_cmp(a, b)
    assert rad_cmp(b, a) is o.reversed()
    assert sum((a < b, a == b, b < a)) == 1


@given(radicals, radicals)
def test_power_soundness(a, b):
    p = math.lcm(a.index, b.index)
    lhs = a.coeff**p * Fraction(a.radicand) ** (p // a.index)
    rhs = b.coeff**p * Fraction(b.radicand) ** (p // b.index)
    assert (rad_cmp(a, b) is Ordering.LESS) == (lhs < rhs)
    assert (rad_cmp(a, b) is Ordering.EQUAL) == (lhs == rhs)


@given(radicals)
def test_normalization_idempotent(a):
    again = rad_new(a.coeff, a.radicand, a.index)
    assert (again.coeff, again.radicand, again.index) == (a.coeff, a.radicand, a.index)


@given(coeffs, st.integers(1, 10**4), st.integers(1, 6), st.integers(1, 6))
def test_equal_values_have_equal_normal_forms(q, r, m, t):
    # q * r^(1/m) == q * (r^t)^(1/(m t))
    assert Radical(q, r, m) == Radical(q, r**t, m * t)


@settings(max_examples=200)
@given(radicals, radicals)
def test_agrees_with_high_precision(a, b):
    with mpmath.workdps(60):
        x = mpmath.mpf(a.coeff.numerator) / a.coeff.denominator * mpmath.root(a.radicand, a.index)
        y = mpmath.mpf(b.coeff.numerator) / b.coeff.denominator * mpmath.root(b.radicand, b.index)
        if abs(x - y) > mpmath.mpf(10) ** -30 * max(x, y):
            assert (rad_cmp(a, b) is Ordering.LESS) == (x < y)


@given(radicals, coeffs)
def test_scale_multiplies_value(a, q):
    scaled = rad_scale(a, q)
    p = a.index * scaled.index
    assert scaled.power_fraction(p) == q**p * a.power_fraction(p)


@given(radicals, radicals)
def test_product_and_quotient(a, b):
    assert (a * b) / b == a

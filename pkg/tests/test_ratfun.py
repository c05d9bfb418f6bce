from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gosper_karaji.errors import ZeroDenominator
from gosper_karaji.poly import Polynomial
from gosper_karaji.ratfun import RationalFunction

X = Polynomial.x()
coef = st.fractions(min_value=-9, max_value=9, max_denominator=4)
polys = st.lists(coef, min_size=1, max_size=4).map(Polynomial)


def test_normalization_cancels_and_makes_monic():
    rf = RationalFunction((X - 1) * (X + 2), (X - 1) * 3)
    assert rf.num == (X + 2) * Fraction(1, 3)
    assert rf.den == Polynomial.constant(1)
    assert rf.is_polynomial()


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDenominator):
        RationalFunction(X, Polynomial())


def test_pole_evaluation_raises():
    rf = RationalFunction(Polynomial.constant(1), X)
    assert rf(2) == Fraction(1, 2)
    with pytest.raises(ZeroDenominator):
        rf(0)


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys, polys, st.integers(-6, 6))
def test_field_operations_pointwise(a, b, c, d, x):
    if b.is_zero() or d.is_zero():
        return
    f, g = RationalFunction(a, b), RationalFunction(c, d)
    if b(x) == 0 or d(x) == 0:
        return
    fx, gx = a(x) / b(x), c(x) / d(x)
    assert (f + g)(x) == fx + gx
    assert (f - g)(x) == fx - gx
    assert (f * g)(x) == fx * gx
    if not g.is_zero() and gx != 0:
        assert (f / g)(x) == fx / gx


def test_shift_and_constant():
    rf = RationalFunction(X, X - 1)
    assert rf.shift(1) == RationalFunction(X + 1, X)
    assert RationalFunction(Fraction(5, 2)).constant_value() == Fraction(5, 2)

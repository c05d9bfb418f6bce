import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gosper_karaji.errors import ResourceLimit
from gosper_karaji.poly import (
    MAX_DEGREE,
    Polynomial,
    dispersion_candidates,
    format_rational,
    integer_roots,
    interpolate,
    nonneg_integer_roots,
    parse_rational,
    poly_gcd,
    poly_shift,
    resultant,
)

X = Polynomial.x()
small = st.fractions(min_value=-20, max_value=20, max_denominator=6)
polys = st.lists(small, min_size=0, max_size=6).map(Polynomial)


def sylvester_resultant(a: Polynomial, b: Polynomial) -> Fraction:
    """Determinant of the Sylvester matrix by Fraction Gaussian elimination."""
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + ac + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + bc + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] / rows[col][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def test_resultant_worked_example():
    a = Polynomial.from_roots([1, -2, 5])
    b = (X + 7) * (X**2 + 3)
    assert resultant(a, b) == 376320


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_resultant_matches_sylvester(a, b):
    if a.degree < 1 or b.degree < 1:
        return
    assert resultant(a, b) == sylvester_resultant(a, b)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_gcd_divides_and_is_monic(a, b, c):
    if c.is_zero():
        return
    g = poly_gcd(a * c, b * c)
    if (a * c).is_zero() and (b * c).is_zero():
        assert g.is_zero()
        return
    assert g.lc == 1
    assert g.divides(a * c) and g.divides(b * c)
    assert c.monic().divides(g) or c.degree == 0


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_divmod_reconstructs(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            divmod(a, b)
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=100, deadline=None)
@given(polys, st.integers(-5, 5), st.integers(-10, 10))
def test_shift_is_substitution(p, j, x):
    assert poly_shift(p, j)(x) == p(x + j)


def test_zero_polynomial_conventions():
    z = Polynomial()
    assert z.degree == -1 and z.is_zero()
    assert Polynomial([0, 0]) == z
    assert Polynomial([3, 0]).degree == 0


def test_interpolation_roundtrip():
    rng = random.Random(3)
    for _ in range(30):
        p = Polynomial([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 7))])
        pts = [(x, p(x)) for x in range(max(p.degree, 0) + 1)]
        assert interpolate(pts) == p


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5), st.integers(1, 5))
def test_integer_roots_against_brute_force(roots, lead):
    p = Polynomial.from_roots(roots, lead) * (X**2 + 1)
    found = integer_roots(p)
    brute = sorted(x for x in range(-40, 41) if p(x) == 0)
    assert found == brute
    assert nonneg_integer_roots(p) == [x for x in brute if x >= 0]


def test_rational_roots_are_not_integer_roots():
    assert integer_roots(2 * X - 1) == []
    assert integer_roots((2 * X - 1) * (X - 3)) == [3]


@pytest.mark.parametrize(
    "q, r, expected",
    [
        (X, X - 1, [1]),
        (X, X - 2, [2]),
        (X + 3, X + 3, [0]),
        (X, X + 1, []),
        (X, (X - 1) * (X - 4), [1, 4]),
        ((X - 1) * (X - 4), X, []),
        (Polynomial.constant(2), X, []),
    ],
)
def test_dispersion_candidates(q, r, expected):
    assert dispersion_candidates(q, r) == expected


def test_degree_cap():
    with pytest.raises(ResourceLimit):
        X ** (MAX_DEGREE + 1)
    assert (X**MAX_DEGREE).degree == MAX_DEGREE


def test_coefficient_cap():
    with pytest.raises(ResourceLimit):
        Polynomial([2**17000])


def test_floats_rejected():
    with pytest.raises(TypeError):
        Polynomial([0.5])


@pytest.mark.parametrize("text, value", [("3", Fraction(3)), ("-7/4", Fraction(-7, 4)), ("10/4", Fraction(5, 2))])
def test_rational_serialization(text, value):
    assert parse_rational(text) == value
    assert parse_rational(format_rational(value)) == value


def test_json_roundtrip():
    p = Polynomial([Fraction(1, 3), 0, -2])
    assert Polynomial.from_json(p.to_json()) == p
    assert p.to_json() == ["1/3", "0", "-2"]


def test_content_and_integer_coeffs():
    p = Polynomial([Fraction(1, 2), Fraction(3, 4)])
    assert p.integer_coeffs() == [2, 3]
    assert p.content() == Fraction(1, 4)

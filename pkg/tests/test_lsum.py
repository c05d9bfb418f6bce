import math
from fractions import Fraction

import pytest

from gosper_karaji.errors import InvalidPrefixSum, NoPrefixSum, NotPolynomial
from gosper_karaji.expr import Const, K, eval_term, to_text
from gosper_karaji.lsum import (
    MAX_M,
    PrefixPair,
    SumTable,
    binomial_coefficients,
    build_prefix_pair,
    eval_multiplier,
    expand_polynomial_case,
    generate_identity,
    identity_family,
    multiplier_check_pairs,
    named_sequence_eval,
    present_identity,
    r_multiplier,
)
from gosper_karaji.parser import parse_term
from gosper_karaji.poly import Polynomial


def test_r_multiplier_small_orders():
    assert r_multiplier(1) == ((1, 0, 0),)
    assert r_multiplier(2) == ((2, 1, 0), (-1, 0, 1))
    assert r_multiplier(3) == ((3, 2, 0), (-3, 1, 1), (1, 0, 2))


@pytest.mark.parametrize("m", range(1, MAX_M + 1))
def test_multiplier_at_one_one(m):
    # sum_{i=1}^m (-1)^(i+1) C(m,i) = 1
    assert eval_multiplier(m, Fraction(1), Fraction(1)) == 1


@pytest.mark.parametrize("m", range(1, 9))
def test_multiplier_identity(m):
    for s in (Fraction(3), Fraction(-2, 5), Fraction(7, 3)):
        for t in (Fraction(1), Fraction(-4), Fraction(5, 2)):
            assert t * eval_multiplier(m, s, t) == s**m - (s - t) ** m


def test_order_bounds():
    for bad in (0, -1, MAX_M + 1):
        with pytest.raises(ValueError):
            r_multiplier(bad)


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("pair", multiplier_check_pairs(), ids=["one", "k", "recip"])
def test_raw_identity_telescopes(pair, m):
    raw = generate_identity(pair, m)
    total = Fraction(0)
    for n in range(pair.k0, pair.k0 + 30):
        total += raw.summand_at(n)
        assert total == raw.rhs_at(n)


def test_expand_polynomial_cases():
    pair = build_prefix_pair(K)
    X = Polynomial.x()
    assert expand_polynomial_case(pair, 1) == X
    assert expand_polynomial_case(pair, 2) == X**3
    with pytest.raises(NotPolynomial):
        expand_polynomial_case(build_prefix_pair(parse_term("1/k")), 2)


def test_binomial_coefficients_reconstruct():
    X = Polynomial.x()
    for p in (X**5, 3 * X**4 - X + 7, Polynomial.constant(2), X * (X - 1) * (X + 6)):
        c = binomial_coefficients(p)
        for k in range(-5, 12):
            value = sum((cj * Fraction(_falling(k, j), math.factorial(j)) for j, cj in enumerate(c)), Fraction(0))
            assert value == p(k)


def _falling(k, j):
    out = 1
    for i in range(j):
        out *= k - i
    return out


def test_named_sequence_values():
    assert named_sequence_eval("harmonic", 3) == Fraction(11, 6)
    assert named_sequence_eval("derangement", 4) == 9
    assert named_sequence_eval("generalized_harmonic", 4, 2) == Fraction(205, 144)


def test_no_prefix_sum_names_resolutions():
    with pytest.raises(NoPrefixSum) as info:
        build_prefix_pair(parse_term("fact(k)"))
    msg = str(info.value)
    assert "--s" in msg and "table" in msg


def test_invalid_prefix_sum():
    with pytest.raises(InvalidPrefixSum):
        build_prefix_pair(K, parse_term("k^2"))
    # correct differences but wrong start value
    with pytest.raises(InvalidPrefixSum):
        build_prefix_pair(K, parse_term("binom(k+1,2) + 1"))


def test_explicit_prefix_sum_accepted():
    pair = build_prefix_pair(parse_term("fact(k)*k"), parse_term("fact(k+1) - 1"))
    assert pair.source == "explicit"


def test_sum_table_registration():
    table = SumTable()
    t = parse_term("D(k)")
    assert table.lookup(t, 1) is None
    table.register("1/k^3", "H(k;3)")
    assert to_text(table.lookup(parse_term("1/k^3"), 1)) == "H(k;3)"


def test_table_lookup_only_from_one():
    table = SumTable()
    assert table.lookup(parse_term("1/k"), 1) is not None
    assert table.lookup(parse_term("1/k"), 2) is None


@pytest.mark.parametrize(
    "t, m, text",
    [
        ("k", 2, "sum(k^3, k=1..n) = binom(n+1,2)^2"),
        ("k", 3, "3/4*sum(k^5, k=1..n) + 1/4*sum(k^3, k=1..n) = binom(n+1,2)^3"),
        ("k", 4, "1/2*sum(k^7, k=1..n) + 1/2*sum(k^5, k=1..n) = binom(n+1,2)^4"),
        ("1/k", 2, "sum(H(k)/k, k=1..n) = 1/2*H(n)^2 + 1/2*H(n;2)"),
    ],
)
def test_presentations(t, m, text):
    [(raw, pres)] = identity_family(parse_term(t), [m])
    assert pres.to_text() == text


def test_binomial_basis_for_constant_term():
    [(raw, pres)] = identity_family(Const(1), [3])
    assert pres.to_text() == "sum(binom(k,2), k=1..n) = binom(n+1,3)"


@pytest.mark.parametrize("t", ["1", "k", "k^2", "2*k+1", "1/k", "1/(k*(k+1))", "pow(2,k)", "k*fact(k)"])
@pytest.mark.parametrize("basis", ["auto", "power", "binomial"])
def test_presentation_is_equivalent(t, basis):
    for raw, pres in identity_family(parse_term(t), [1, 2, 3, 4], basis=basis):
        lo = raw.lower
        raw_lhs = pres_lhs = Fraction(0)
        for n in range(lo, lo + 20):
            raw_lhs += raw.summand_at(n)
            pres_lhs += pres.lhs_summand_at(n)
            # each moved closed form is the prefix sum of its summand
            for _, u, v in pres.moved:
                assert eval_term(v, n) == sum(eval_term(u, j) for j in range(lo, n + 1))
            assert raw_lhs == raw.rhs_at(n)
            assert pres_lhs == pres.rhs_at(n)


def test_presentation_scale_relation():
    for raw, pres in identity_family(parse_term("1/k"), [2, 3, 4]):
        for n in range(1, 15):
            raw_lhs = sum(raw.summand_at(j) for j in range(1, n + 1))
            pres_lhs = sum(pres.lhs_summand_at(j) for j in range(1, n + 1))
            moved = sum(c * sum(eval_term(u, j) for j in range(1, n + 1)) for c, u, _ in pres.moved)
            assert raw_lhs == pres.scale * pres_lhs + moved


def test_unknown_basis():
    raw = generate_identity(build_prefix_pair(K), 2)
    with pytest.raises(ValueError):
        present_identity(raw, "fourier")


def test_prefix_pair_validate_direct():
    PrefixPair(parse_term("2*k+1"), parse_term("k^2+2*k"), 1).validate()
    with pytest.raises(InvalidPrefixSum):
        PrefixPair(parse_term("2*k+1"), parse_term("k^2"), 1).validate()

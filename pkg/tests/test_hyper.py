from fractions import Fraction

import pytest

from gosper_karaji.errors import DomainError, NotHypergeometric
from gosper_karaji.expr import eval_term
from gosper_karaji.hyper import term_ratio
from gosper_karaji.parser import parse_term
from gosper_karaji.poly import Polynomial
from gosper_karaji.ratfun import RationalFunction

X = Polynomial.x()


@pytest.mark.parametrize(
    "text, rho, k0",
    [
        ("k", RationalFunction(X, X - 1), 1),
        ("fact(k)", RationalFunction(X), 0),
        ("binom(10,k)", RationalFunction(11 - X, X), 0),
        ("1/(k*(k+1))", RationalFunction(X - 1, X + 1), 1),
        ("pow(2,k)", RationalFunction(2), 0),
        ("fact(2*k)", RationalFunction(2 * X * (2 * X - 1)), 0),
    ],
)
def test_known_ratios(text, rho, k0):
    r = term_ratio(parse_term(text))
    assert r.rho == rho
    assert r.base_index == k0


@pytest.mark.parametrize(
    "text",
    ["(4*k+1)*fact(k)/fact(2*k+1)", "binom(2*k,k)*pow(1/4,k)", "k^2*pow(-3,k)/fact(k+2)",
     "binom(k+3,2) + k*binom(k+3,2)", "fact(k+1) - 3*fact(k)", "binom(12,k)*pow(-1,k)"],
)
def test_ratio_matches_consecutive_values(text):
    t = parse_term(text)
    r = term_ratio(t)
    for k in range(r.base_index + 1, r.base_index + 15):
        prev = eval_term(t, k - 1)
        if prev == 0:
            continue
        assert r.rho(k) == eval_term(t, k) / prev


@pytest.mark.parametrize("text", ["H(k)", "k + fact(k)", "pow(2,k) + 1", "D(k)", "S(k)"])
def test_non_hypergeometric_rejected(text):
    with pytest.raises(NotHypergeometric):
        term_ratio(parse_term(text))


def test_identically_zero_rejected():
    with pytest.raises(NotHypergeometric):
        term_ratio(parse_term("k - k"))


def test_base_value_is_defined_and_nonzero():
    r = term_ratio(parse_term("1/(k*(k-3))"))
    assert r.base_index == 4
    assert r.base_value == Fraction(1, 4)


def test_no_usable_base_point():
    # a terminating term has no nonzero value past its support
    with pytest.raises(DomainError):
        term_ratio(parse_term("binom(3,k)"), lower=10)

"""Consecutive-term ratios of hypergeometric terms.

Every hypergeometric expression is brought to the canonical shape

    t(k) = coef(k) * base**k * prod_a fact(a*k)**e_a

with ``coef`` a rational function.  Shifted factorials are rewritten as
``fact(a*k)`` times a rational factor, so two summands are proportional by a
rational function exactly when their ``(base, exponents)`` parts agree.  The
ratio ``rho(k) = t(k) / t(k-1)`` follows directly from that shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, NotHypergeometric
from .expr import (
    NAMED,
    Add,
    Binom,
    Const,
    Div,
    Expr,
    Fact,
    Geom,
    Linear,
    Mul,
    Neg,
    Pow,
    PrefixSym,
    Var,
    eval_term,
    to_text,
)
from .poly import Polynomial, integer_roots
from .ratfun import RationalFunction

# how far past the first candidate index to look for a usable base value
_BASE_SEARCH = 64


@dataclass(frozen=True)
class HyperForm:
    coef: RationalFunction
    base: Fraction
    facts: tuple  # sorted ((a, exponent), ...) with a != 0 and exponent != 0

    @property
    def key(self):
        return (self.base, self.facts)

    def hyper_ratio(self) -> RationalFunction:
        """``h(k) / h(k-1)`` for the pure part ``h = base**k * prod fact(a*k)**e``."""
        rho = RationalFunction(self.base)
        for a, e in self.facts:
            rho = rho * fact_ratio(a) ** e
        return rho

    def ratio(self) -> RationalFunction:
        if self.coef.is_zero():
            raise NotHypergeometric("the term is identically zero")
        return self.coef / self.coef.shift(-1) * self.hyper_ratio()


def fact_ratio(a: int) -> RationalFunction:
    """``fact(a*k) / fact(a*(k-1))`` as a rational function of ``k``."""
    k = Polynomial.x()
    if a > 0:
        p = Polynomial.constant(1)
        for i in range(a):
            p = p * (k * a - i)
        return RationalFunction(p)
    p = Polynomial.constant(1)
    for i in range(1, -a + 1):
        p = p * (k * a + i)
    return RationalFunction(Polynomial.constant(1), p)


def _merge(f1: tuple, f2: tuple, sign: int = 1) -> tuple:
    d = dict(f1)
    for a, e in f2:
        d[a] = d.get(a, 0) + sign * e
    return tuple(sorted((a, e) for a, e in d.items() if e != 0))


def _fact_form(lin: Linear) -> HyperForm:
    a, b = lin.a, lin.b
    if a == 0:
        if b < 0:
            raise DomainError(f"factorial of negative constant {b}")
        return HyperForm(RationalFunction(math.factorial(b)), Fraction(1), ())
    k = Polynomial.x()
    p = Polynomial.constant(1)
    # fact(a*k + b) = fact(a*k) * (a*k+1)...(a*k+b) for b > 0, and the reciprocal product for b < 0
    for i in range(1, abs(b) + 1) if b > 0 else range(b + 1, 1):
        p = p * (k * a + i)
    coef = RationalFunction(p) if b >= 0 else RationalFunction(Polynomial.constant(1), p)
    return HyperForm(coef, Fraction(1), ((a, 1),))


def hyper_form(e: Expr) -> HyperForm:
    """Canonical hypergeometric shape of ``e``; raises :class:`NotHypergeometric`."""
    if isinstance(e, Const):
        return HyperForm(RationalFunction(e.value), Fraction(1), ())
    if isinstance(e, Var):
        return HyperForm(RationalFunction.x(), Fraction(1), ())
    if isinstance(e, NAMED) or isinstance(e, PrefixSym):
        raise NotHypergeometric(f"{to_text(e)} is a named sequence, not a hypergeometric term")
    if isinstance(e, Neg):
        f = hyper_form(e.arg)
        return HyperForm(-f.coef, f.base, f.facts)
    if isinstance(e, Mul):
        acc = HyperForm(RationalFunction(1), Fraction(1), ())
        for factor in e.factors:
            f = hyper_form(factor)
            acc = HyperForm(acc.coef * f.coef, acc.base * f.base, _merge(acc.facts, f.facts))
        return acc
    if isinstance(e, Div):
        n, d = hyper_form(e.num), hyper_form(e.den)
        if d.coef.is_zero():
            raise DomainError("division by an identically zero expression")
        return HyperForm(n.coef / d.coef, n.base / d.base, _merge(n.facts, d.facts, -1))
    if isinstance(e, Pow):
        f = hyper_form(e.base)
        if f.coef.is_zero() and e.exp < 0:
            raise DomainError("zero raised to a negative power")
        return HyperForm(f.coef**e.exp, f.base**e.exp, tuple((a, x * e.exp) for a, x in f.facts))
    if isinstance(e, Fact):
        return _fact_form(e.arg)
    if isinstance(e, Binom):
        top, bottom = _fact_form(e.top), _fact_form(e.bottom)
        diff = _fact_form(e.top - e.bottom)
        return HyperForm(
            top.coef / (bottom.coef * diff.coef),
            Fraction(1),
            _merge(_merge(top.facts, bottom.facts, -1), diff.facts, -1),
        )
    if isinstance(e, Geom):
        return HyperForm(RationalFunction(1), e.base, ())
    if isinstance(e, Add):
        forms = [hyper_form(t) for t in e.terms]
        live = [f for f in forms if not f.coef.is_zero()]
        if not live:
            return HyperForm(RationalFunction(0), Fraction(1), ())
        key = live[0].key
        if any(f.key != key for f in live[1:]):
            raise NotHypergeometric(
                f"summands of {to_text(e)} are not rational multiples of a common term"
            )
        coef = RationalFunction(0)
        for f in live:
            coef = coef + f.coef
        return HyperForm(coef, key[0], key[1])
    raise TypeError(f"unknown node {e!r}")


@dataclass(frozen=True)
class HypergeometricRatio:
    """``rho(k) = t(k) / t(k-1)`` together with a base point ``t(k0) != 0``.

    ``rho`` has no pole at any integer above ``k0``; zeros above ``k0`` are
    allowed and mark where a terminating term becomes identically zero.
    """

    rho: RationalFunction
    base_index: int
    base_value: Fraction
    form: HyperForm


def _safe_eval(e: Expr, k: int) -> Optional[Fraction]:
    try:
        return eval_term(e, k)
    except (DomainError, ZeroDivisionError):
        return None


def term_ratio(e: Expr, lower: int = 0) -> HypergeometricRatio:
    """Compute the consecutive-term ratio of a hypergeometric term.

    The base index is the first ``k >= lower`` past every integer pole of
    ``rho`` at which ``t`` evaluates to a nonzero value.
    """
    form = hyper_form(e)
    rho = form.ratio()
    if rho.is_zero():
        raise NotHypergeometric(f"{to_text(e)} has a zero ratio")
    k0 = lower
    if rho.den.degree > 0:
        poles = integer_roots(rho.den)
        if poles:
            k0 = max(k0, poles[-1])
    for k in range(k0, k0 + _BASE_SEARCH):
        v = _safe_eval(e, k)
        if v:
            return HypergeometricRatio(rho, k, v, form)
    raise DomainError(f"{to_text(e)} has no nonzero defined value near k={k0}")

"""Gosper's decision procedure for indefinite hypergeometric summation.

Conventions: ``rho(n) = t(n) / t(n-1)`` is written in Gosper form

    rho(n) = p(n) q(n) / (p(n-1) r(n)),   gcd(q(n), r(n+j)) = 1 for all j >= 0,

and a polynomial ``f`` solving the key equation

    p(n) = q(n+1) f(n) - r(n) f(n-1)

gives the antidifference ``F(k) = r(k) f(k-1) t(k) / p(k)`` with
``F(k+1) - F(k) = t(k)``.  This equals ``q(k) f(k-1) t(k-1) / p(k-1)``
wherever both sides are defined.  A missing polynomial solution is a proof
that no hypergeometric antidifference exists, reported as ``None``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import GosperKarajiError
from .expr import (
    Add,
    Const,
    Div,
    Expr,
    Fact,
    Geom,
    Linear,
    Mul,
    Neg,
    add,
    eval_term,
    mul,
    poly_expr,
    power,
    ratfun_expr,
    shift_expr,
    to_text,
)
from .hyper import HyperForm, HypergeometricRatio, term_ratio
from .poly import Polynomial, dispersion_candidates, integer_roots, poly_gcd, poly_shift
from .ratfun import RationalFunction

log = logging.getLogger(__name__)

TELESCOPING_SAMPLES = 20


@dataclass(frozen=True)
class GosperForm:
    p: Polynomial
    q: Polynomial
    r: Polynomial

    def to_json(self) -> dict:
        return {"p": self.p.to_json(), "q": self.q.to_json(), "r": self.r.to_json()}


def gosper_form(rho: RationalFunction) -> GosperForm:
    """Split ``rho`` into ``(p, q, r)`` by extracting every dispersion shift."""
    if rho.is_zero():
        raise ValueError("the zero ratio has no Gosper form")
    p = Polynomial.constant(1)
    q, r = rho.num, rho.den
    while True:
        candidates = dispersion_candidates(q, r)
        if not candidates:
            break
        for j in candidates:
            g = poly_gcd(q, poly_shift(r, j))
            if g.degree < 1:
                continue
            q = q.exact_div(g)
            r = r.exact_div(poly_shift(g, -j))
            for i in range(j):
                p = p * poly_shift(g, -i)
    return GosperForm(p, q, r)


def degree_bound(form: GosperForm) -> Optional[int]:
    """Largest possible degree of a polynomial solution, or ``None`` if there is none."""
    qs = poly_shift(form.q, 1)
    u = qs - form.r
    v = qs + form.r
    dp = form.p.degree
    if not u.is_zero() and u.degree >= v.degree:
        d = dp - u.degree
        return d if d >= 0 else None
    candidates = [dp - v.degree + 1]
    # cancellation of leading terms is only possible when deg u = deg v - 1 (or u vanishes)
    if u.is_zero() or u.degree == v.degree - 1:
        d1 = -2 * u.lc / v.lc
        if d1.denominator == 1 and d1 >= 0:
            candidates.append(int(d1))
    d = max(candidates)
    return d if d >= 0 else None


def _solve_linear(rows: list[list[Fraction]], nvars: int) -> Optional[list[Fraction]]:
    """Particular solution of an augmented system by fraction-free elimination.

    Each row is scaled to integers and eliminated with integer
    cross-multiplication; free variables are set to zero.
    """
    mat = []
    for row in rows:
        den = 1
        for c in row:
            den = den * c.denominator // math.gcd(den, c.denominator)
        mat.append([int(c * den) for c in row])
    pivots = []
    rank = 0
    for col in range(nvars):
        pr = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        piv = mat[rank]
        for i in range(len(mat)):
            if i == rank or mat[i][col] == 0:
                continue
            f = mat[i][col]
            row = [piv[col] * a - f * b for a, b in zip(mat[i], piv)]
            g = 0
            for a in row:
                g = math.gcd(g, a)
            mat[i] = [a // g for a in row] if g > 1 else row
        pivots.append(col)
        rank += 1
    for i in range(rank, len(mat)):
        if mat[i][-1] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        sol[col] = Fraction(mat[i][-1], mat[i][col])
    return sol


def solve_key_equation(form: GosperForm, d: int) -> Optional[Polynomial]:
    """Polynomial ``f`` of degree at most ``d`` with ``p(n) = q(n+1) f(n) - r(n) f(n-1)``."""
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    n = Polynomial.x()
    qs = poly_shift(form.q, 1)
    columns = []
    for i in range(d + 1):
        columns.append(qs * n**i - form.r * (n - 1) ** i)
    height = max([c.degree for c in columns] + [form.p.degree]) + 1
    rows = [[col[row] for col in columns] + [form.p[row]] for row in range(height)]
    sol = _solve_linear(rows, d + 1)
    if sol is None:
        return None
    f = Polynomial(sol)
    # exact re-check of the polynomial identity
    if qs * f - form.r * poly_shift(f, -1) != form.p:
        raise ArithmeticError("key equation solution failed verification")
    return f


# -- closed forms ----------------------------------------------------------------------


def _split_content(p: Polynomial) -> tuple[Fraction, Polynomial]:
    if p.is_zero():
        return Fraction(0), p
    c = p.content()
    if p.lc < 0:
        c = -c
    return c, p * (1 / c)


def _grouped(atoms: list) -> list:
    counts: dict = {}
    for x in atoms:
        counts[x] = counts.get(x, 0) + 1
    return [power(x, c) for x, c in counts.items()]


def hyper_expr(g: RationalFunction, form: HyperForm) -> Expr:
    """Readable expression for ``g(k) * base**k * prod fact(a*k)**e``.

    Linear factors of ``g`` adjacent to a factorial are folded into its
    argument, so ``fact(2*k) * (2*k+1)`` prints as ``fact(2*k+1)``.
    """
    num_atoms, den_atoms = [], []
    for a, e in form.facts:
        for _ in range(abs(e)):
            (num_atoms if e > 0 else den_atoms).append(a)
    num, den = g.num, g.den
    num_facts, den_facts = [], []
    for a in num_atoms:
        b = 0
        while num.degree >= 1 and Polynomial.linear(a, b + 1).divides(num):
            num = num.exact_div(Polynomial.linear(a, b + 1))
            b += 1
        num_facts.append(Fact(Linear(a, b)))
    num_facts = _grouped(num_facts)
    for a in den_atoms:
        b = 0
        while den.degree >= 1 and Polynomial.linear(a, b + 1).divides(den):
            den = den.exact_div(Polynomial.linear(a, b + 1))
            b += 1
        den_facts.append(Fact(Linear(a, b)))
    den_facts = _grouped(den_facts)
    cn, num_p = _split_content(num)
    cd, den_p = _split_content(den)
    c = cn / cd
    geom = [Geom(form.base)] if form.base != 1 else []
    top = mul(Const(c.numerator), poly_expr(num_p), *geom, *num_facts)
    bottom = mul(Const(c.denominator), poly_expr(den_p, binomial_shape=False, factor=True), *den_facts)
    if isinstance(bottom, Const) and bottom.value == 1:
        return top
    if isinstance(top, Neg):
        return Neg(Div(top.arg, bottom))
    return Div(top, bottom)


def _with_constant(c: Fraction, e: Expr) -> Expr:
    if c == 0:
        return e
    if c > 0:
        if isinstance(e, Mul) and isinstance(e.factors[0], Const) and e.factors[0].value < 0:
            e = Neg(mul(Const(-e.factors[0].value), *e.factors[1:]))
        return Add((Const(c), e))
    return add(e, Const(c))


@dataclass(frozen=True)
class Antidifference:
    """``F`` with ``F(k+1) - F(k) = t(k)`` for every ``k >= k0``."""

    F: Expr
    t: Expr
    k0: int
    certificate: RationalFunction  # F(k) = certificate(k) * t(k)
    ratio: HypergeometricRatio
    form: GosperForm
    degree_bound: int
    f: Polynomial

    def __call__(self, k: int) -> Fraction:
        return eval_term(self.F, k)


def _antidifference_expr(t: Expr, cert: RationalFunction, hform: HyperForm, shift: int = 0) -> Expr:
    """``cert(k+shift) * t(k+shift)`` as an expression in ``k``."""
    if any(a < 0 for a, _ in hform.facts):
        return mul(ratfun_expr(cert.shift(shift)), shift_expr(t, shift))
    g = cert * hform.coef
    if shift:
        g = g.shift(shift)
        hr = hform.hyper_ratio()
        for i in range(1, shift + 1):
            g = g * hr.shift(i)
    if not hform.facts and hform.base == 1:
        return ratfun_expr(g)
    return hyper_expr(g, hform)


def _pole_free_start(cert: RationalFunction, start: int) -> int:
    if cert.den.degree < 1:
        return start
    roots = [z for z in integer_roots(cert.den) if z >= start]
    return max(roots) + 1 if roots else start


def gosper_sum(t: Expr) -> Optional[Antidifference]:
    """Run Gosper's algorithm on ``t``; ``None`` means no hypergeometric antidifference exists."""
    ratio = term_ratio(t)
    form = gosper_form(ratio.rho)
    d = degree_bound(form)
    if d is None:
        log.debug("no admissible degree for %s", to_text(t))
        return None
    f = solve_key_equation(form, d)
    if f is None:
        return None
    cert = RationalFunction(form.r * poly_shift(f, -1), form.p)
    start = _pole_free_start(cert, ratio.base_index)
    F = _antidifference_expr(t, cert, ratio.form)
    ad = Antidifference(F, t, start, cert, ratio, form, d, f)
    for k in range(start, start + TELESCOPING_SAMPLES):
        if ad(k + 1) - ad(k) != eval_term(t, k):
            raise ArithmeticError(f"telescoping check failed for {to_text(t)} at k={k}")
    return ad


def definite_sum(t: Expr, lower: int = 1, ad: Optional[Antidifference] = None) -> Optional[Expr]:
    """Closed form ``S(k) = sum_{j=lower}^{k} t(j)`` as an expression in ``k``.

    Values of ``t`` below the antidifference's start index are summed
    directly and folded into the constant.
    """
    if ad is None:
        ad = gosper_sum(t)
    if ad is None:
        return None
    start = max(ad.k0, lower)
    initial = Fraction(0)
    for k in range(lower, start):
        initial += eval_term(t, k)
    c = initial - ad(start)
    hform = ad.ratio.form
    if not hform.facts and hform.base == 1:
        return ratfun_expr((ad.certificate * hform.coef).shift(1) + c)
    head = _antidifference_expr(t, ad.certificate, hform, shift=1)
    return _with_constant(c, head)


def gosper_record(text: str, lower: int = 1) -> dict:
    """JSON-ready result record for a term given as text."""
    from .parser import parse_term

    record: dict = {"status": "error", "input": text}
    try:
        t = parse_term(text)
        ratio = term_ratio(t)
        record["ratio"] = {"num": ratio.rho.num.to_json(), "den": ratio.rho.den.to_json()}
        form = gosper_form(ratio.rho)
        record["gosper_form"] = form.to_json()
        d = degree_bound(form)
        record["degree_bound"] = d
        ad = gosper_sum(t)
        if ad is None:
            record.update(status="fail", f=None, antidifference=None, definite_sum=None,
                          checks={"telescoping_samples": 0})
            return record
        s = definite_sum(t, max(lower, ad.ratio.base_index), ad)
        record.update(
            status="sum",
            f=ad.f.to_json(),
            antidifference=to_text(ad.F),
            antidifference_start=ad.k0,
            definite_sum=to_text(s),
            lower=max(lower, ad.ratio.base_index),
            checks={"telescoping_samples": TELESCOPING_SAMPLES},
        )
    except (GosperKarajiError, ArithmeticError) as exc:
        record["status"] = "error"
        record["error"] = f"{type(exc).__name__}: {exc}"
    return record

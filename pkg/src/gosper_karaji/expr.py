"""Expression trees for terms in one summation variable ``k``.

Nodes are frozen dataclasses, so expressions are immutable and hashable.
The canonical text printer emits exactly the grammar accepted by
:mod:`gosper_karaji.parser`; ``parse(to_text(e)) == e`` for every tree the
parser can produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import DomainError, NotHypergeometric
from .poly import Polynomial, format_rational, integer_roots
from .ratfun import RationalFunction
from . import sequences


@dataclass(frozen=True)
class Linear:
    """The integer linear form ``a*k + b``."""

    a: int
    b: int

    def __call__(self, k: int) -> int:
        return self.a * k + self.b

    def shift(self, j: int) -> Linear:
        return Linear(self.a, self.b + self.a * j)

    def __sub__(self, other: Linear) -> Linear:
        return Linear(self.a - other.a, self.b - other.b)

    def poly(self) -> Polynomial:
        return Polynomial.linear(self.a, self.b)

    def to_text(self, var: str = "k") -> str:
        if self.a == 0:
            return str(self.b)
        head = var if self.a == 1 else "-" + var if self.a == -1 else f"{self.a}*{var}"
        if self.b == 0:
            return head
        return f"{head}{'+' if self.b > 0 else '-'}{abs(self.b)}"


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Fact(Expr):
    arg: Linear


@dataclass(frozen=True)
class Binom(Expr):
    top: Linear
    bottom: Linear


@dataclass(frozen=True)
class Geom(Expr):
    """``base ** k`` for a nonzero rational base."""

    base: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))


@dataclass(frozen=True)
class Harmonic(Expr):
    pass


@dataclass(frozen=True)
class GenHarmonic(Expr):
    order: int


@dataclass(frozen=True)
class Derangement(Expr):
    pass


@dataclass(frozen=True)
class ZetaPartial(Expr):
    s: int


@dataclass(frozen=True)
class PrefixSym(Expr):
    """The prefix sum ``s(k)`` of an identity's term."""


K = Var()
NAMED = (Harmonic, GenHarmonic, Derangement, ZetaPartial)
_ATOMS = (Var, Fact, Binom, Geom, Harmonic, GenHarmonic, Derangement, ZetaPartial, PrefixSym)


def walk(e: Expr):
    yield e
    if isinstance(e, Add):
        for t in e.terms:
            yield from walk(t)
    elif isinstance(e, Mul):
        for f in e.factors:
            yield from walk(f)
    elif isinstance(e, (Neg,)):
        yield from walk(e.arg)
    elif isinstance(e, Pow):
        yield from walk(e.base)
    elif isinstance(e, Div):
        yield from walk(e.num)
        yield from walk(e.den)


def has_named(e: Expr) -> bool:
    return any(isinstance(n, NAMED + (PrefixSym,)) for n in walk(e))


# -- smart constructors -----------------------------------------------------------


def const(c) -> Const:
    return Const(Fraction(c))


def add(*terms: Expr) -> Expr:
    flat = []
    total = Fraction(0)
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    out = []
    for t in flat:
        if isinstance(t, Const):
            total += t.value
        else:
            out.append(t)
    if total != 0 or not out:
        out.append(Const(total))
    for i in range(1, len(out)):
        f = out[i]
        if isinstance(f, Mul) and isinstance(f.factors[0], Const) and f.factors[0].value < 0:
            out[i] = Neg(mul(Const(-f.factors[0].value), *f.factors[1:]))
    return out[0] if len(out) == 1 else Add(tuple(out))


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Neg):
        return e.arg
    return Neg(e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def mul(*factors: Expr) -> Expr:
    coeff = Fraction(1)
    out = []
    stack = list(reversed(factors))
    while stack:
        p = stack.pop()
        if isinstance(p, Mul):
            stack.extend(reversed(p.factors))
        elif isinstance(p, Neg):
            coeff = -coeff
            stack.append(p.arg)
        elif isinstance(p, Const):
            coeff *= p.value
        else:
            out.append(p)
    if coeff == 0:
        return Const(0)
    if not out:
        return Const(coeff)
    body = out[0] if len(out) == 1 else Mul(tuple(out))
    if coeff == 1:
        return body
    if coeff == -1:
        return Neg(body)
    return Mul((Const(coeff),) + tuple(out))


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const):
        if b.value == 0:
            raise DomainError("division by zero constant")
        return mul(Const(1 / b.value), a)
    if isinstance(a, Const) and a.value == 0:
        return a
    return Div(a, b)


def power(base: Expr, e: int) -> Expr:
    if e == 0:
        return Const(1)
    if e == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**e)
    return Pow(base, e)


# -- evaluation ----------------------------------------------------------------------


def binom_value(top: int, bottom: int) -> int:
    """Binomial coefficient, zero outside ``0 <= bottom <= top`` for ``top >= 0``."""
    if bottom < 0:
        return 0
    if top >= 0:
        return math.comb(top, bottom) if bottom <= top else 0
    return (-1) ** bottom * math.comb(bottom - top - 1, bottom)


def eval_term(e: Expr, k: int, prefix: Optional[Callable[[int], Fraction]] = None) -> Fraction:
    """Exact value of ``e`` at the integer ``k``.

    ``prefix`` supplies values for :class:`PrefixSym` nodes.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return Fraction(k)
    if isinstance(e, Add):
        return sum((eval_term(t, k, prefix) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        acc = Fraction(1)
        for f in e.factors:
            acc *= eval_term(f, k, prefix)
        return acc
    if isinstance(e, Neg):
        return -eval_term(e.arg, k, prefix)
    if isinstance(e, Pow):
        b = eval_term(e.base, k, prefix)
        if b == 0 and e.exp < 0:
            raise DomainError(f"zero raised to negative power at k={k}")
        return b**e.exp
    if isinstance(e, Div):
        d = eval_term(e.den, k, prefix)
        if d == 0:
            raise DomainError(f"zero denominator at k={k}")
        return eval_term(e.num, k, prefix) / d
    if isinstance(e, Fact):
        n = e.arg(k)
        if n < 0:
            raise DomainError(f"factorial of negative integer {n} at k={k}")
        return Fraction(math.factorial(n))
    if isinstance(e, Binom):
        return Fraction(binom_value(e.top(k), e.bottom(k)))
    if isinstance(e, Geom):
        return e.base**k
    if isinstance(e, Harmonic):
        return sequences.harmonic(k)
    if isinstance(e, GenHarmonic):
        return sequences.generalized_harmonic(e.order)(k)
    if isinstance(e, Derangement):
        return sequences.derangement(k)
    if isinstance(e, ZetaPartial):
        return sequences.zeta_partial(k, e.s)
    if isinstance(e, PrefixSym):
        if prefix is None:
            raise DomainError("prefix-sum symbol evaluated without a prefix sum")
        return prefix(k)
    raise TypeError(f"unknown node {e!r}")


def shift_expr(e: Expr, j: int) -> Expr:
    """Substitute ``k -> k + j``; named sequences are not shiftable."""
    if j == 0:
        return e
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return add(K, Const(j))
    if isinstance(e, Add):
        return Add(tuple(shift_expr(t, j) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(shift_expr(f, j) for f in e.factors))
    if isinstance(e, Neg):
        return Neg(shift_expr(e.arg, j))
    if isinstance(e, Pow):
        return Pow(shift_expr(e.base, j), e.exp)
    if isinstance(e, Div):
        return Div(shift_expr(e.num, j), shift_expr(e.den, j))
    if isinstance(e, Fact):
        return Fact(e.arg.shift(j))
    if isinstance(e, Binom):
        return Binom(e.top.shift(j), e.bottom.shift(j))
    if isinstance(e, Geom):
        return Mul((Const(e.base**j), e))
    raise NotHypergeometric(f"cannot shift {to_text(e)}")


# -- conversion to and from rational functions -------------------------------------


def to_ratfun(e: Expr) -> RationalFunction:
    """Rational-function value of an expression built only from polynomial pieces.

    Raises :class:`NotHypergeometric` for factorials, geometric factors or
    named sequences that depend on ``k``.
    """
    if isinstance(e, Const):
        return RationalFunction(e.value)
    if isinstance(e, Var):
        return RationalFunction.x()
    if isinstance(e, Add):
        acc = RationalFunction(0)
        for t in e.terms:
            acc = acc + to_ratfun(t)
        return acc
    if isinstance(e, Mul):
        acc = RationalFunction(1)
        for f in e.factors:
            acc = acc * to_ratfun(f)
        return acc
    if isinstance(e, Neg):
        return -to_ratfun(e.arg)
    if isinstance(e, Pow):
        return to_ratfun(e.base) ** e.exp
    if isinstance(e, Div):
        return to_ratfun(e.num) / to_ratfun(e.den)
    if isinstance(e, Fact) and e.arg.a == 0:
        if e.arg.b < 0:
            raise DomainError("factorial of a negative constant")
        return RationalFunction(math.factorial(e.arg.b))
    if isinstance(e, Binom) and e.bottom.a == 0:
        d = e.bottom.b
        if d < 0:
            return RationalFunction(0)
        p = Polynomial.constant(Fraction(1, math.factorial(d)))
        top = e.top.poly()
        for i in range(d):
            p = p * (top - i)
        return RationalFunction(p)
    if isinstance(e, Geom) and e.base == 1:
        return RationalFunction(1)
    raise NotHypergeometric(f"{to_text(e)} is not a rational function of k")


def is_rational_in_k(e: Expr) -> bool:
    try:
        to_ratfun(e)
    except (NotHypergeometric, DomainError):
        return False
    return True


def _root_multiplicities(p: Polynomial) -> Optional[list[tuple[int, int]]]:
    """Integer roots with multiplicity when they account for the whole degree."""
    if p.degree < 1:
        return []
    roots = integer_roots(p)
    out = []
    rest = p
    for r in roots:
        m = 0
        lin = Polynomial((-r, 1))
        while rest.degree >= 1 and lin.divides(rest):
            rest = rest.exact_div(lin)
            m += 1
        out.append((r, m))
    return out if rest.degree == 0 else None


def poly_expr(p: Polynomial, binomial_shape: bool = True, factor: bool = False) -> Expr:
    """An expression for ``p(k)`` chosen for readability.

    Tries ``c*binom(k+a, d)`` when the roots are ``d`` consecutive integers,
    then (with ``factor``) a product of integer linear factors, and falls
    back to the expanded form over an integer content.
    """
    if p.degree <= 0:
        return Const(p[0])
    roots = _root_multiplicities(p) if p.degree >= 2 or factor else None
    if roots is not None and roots and sum(m for _, m in roots) == p.degree:
        rs = [r for r, _ in roots]
        d = p.degree
        if binomial_shape and d >= 2 and all(m == 1 for _, m in roots) and rs == list(range(rs[0], rs[0] + d)):
            a = -rs[0]
            c = p.lc * math.factorial(d)
            return mul(Const(c), Binom(Linear(1, a), Linear(0, d)))
        if factor:
            parts = [power(_lin_expr(r), m) for r, m in sorted(roots, reverse=True)]
            return mul(Const(p.lc), *parts)
    ints = p.integer_coeffs()
    content = p.lc / ints[-1]
    terms = []
    for i in range(len(ints) - 1, -1, -1):
        c = ints[i]
        if c == 0:
            continue
        mono = Const(1) if i == 0 else K if i == 1 else Pow(K, i)
        terms.append(mul(Const(c), mono))
    body = add(*terms)
    return _over(mul(Const(content.numerator), body), content.denominator)


def _lin_expr(root: int) -> Expr:
    return add(K, Const(-root))


def _over(num: Expr, den: int) -> Expr:
    if den == 1:
        return num
    if isinstance(num, Neg):
        return Neg(Div(num.arg, Const(den)))
    return Div(num, Const(den))


def ratfun_expr(rf: RationalFunction) -> Expr:
    """Readable expression for a rational function of ``k``."""
    if rf.den.degree == 0:
        return poly_expr(rf.num)
    num_c = rf.num.content() if rf.num else Fraction(0)
    if rf.num and rf.num.lc < 0:
        num_c = -num_c
    den_c = rf.den.content()
    c = num_c / den_c if rf.num else Fraction(0)
    if c == 0:
        return Const(0)
    n_prim = rf.num * (1 / num_c)
    d_prim = rf.den * (1 / den_c)
    num_e = mul(Const(c.numerator), poly_expr(n_prim))
    den_e = mul(Const(c.denominator), poly_expr(d_prim, binomial_shape=False, factor=True))
    if isinstance(num_e, Neg):
        return Neg(Div(num_e.arg, den_e))
    return Div(num_e, den_e)


# -- printing ---------------------------------------------------------------------------


def _is_natural(e: Expr) -> bool:
    return isinstance(e, Const) and e.value.denominator == 1 and e.value >= 0


def _fmt_const(c: Fraction) -> str:
    if c.denominator == 1 and c >= 0:
        return str(c.numerator)
    return f"({format_rational(c)})"


def to_text(e: Expr, var: str = "k", _nested: bool = False) -> str:
    """Canonical ASCII form in the term grammar, with ``var`` as the variable name."""
    t = lambda x: to_text(x, var, True)  # noqa: E731
    if isinstance(e, Const):
        return _fmt_const(e.value) if _nested else format_rational(e.value)
    if isinstance(e, Var):
        return var
    if isinstance(e, Add):
        out = []
        for i, term in enumerate(e.terms):
            if i > 0 and isinstance(term, Neg):
                inner = term.arg
                s = t(inner)
                if isinstance(inner, Add):
                    s = f"({s})"
                out.append(f" - {s}")
                continue
            if isinstance(term, Const):
                c = term.value
                if i == 0:
                    out.append(format_rational(c))
                else:
                    out.append(f" {'-' if c < 0 else '+'} {format_rational(abs(c))}")
                continue
            s = t(term)
            if isinstance(term, Add):
                s = f"({s})"
            out.append(s if i == 0 else f" + {s}")
        return "".join(out)
    if isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            if i == 0 and isinstance(f, Const):
                parts.append(format_rational(f.value))
                continue
            s = t(f)
            if isinstance(f, (Add, Mul)) or (i > 0 and isinstance(f, Div)):
                s = f"({s})"
            parts.append(s)
        return "*".join(parts)
    if isinstance(e, Div):
        num = format_rational(e.num.value) if isinstance(e.num, Const) else t(e.num)
        if isinstance(e.num, Add):
            num = f"({num})"
        den = t(e.den)
        if isinstance(e.den, (Add, Mul, Div)):
            den = f"({den})"
        return f"{num}/{den}"
    if isinstance(e, Neg):
        s = t(e.arg)
        if not (isinstance(e.arg, _ATOMS + (Pow, Neg)) or _is_natural(e.arg)):
            s = f"({s})"
        return f"-{s}"
    if isinstance(e, Pow):
        b = t(e.base)
        if not (isinstance(e.base, _ATOMS) or _is_natural(e.base)):
            b = f"({b})"
        return f"{b}^{e.exp}"
    if isinstance(e, Fact):
        return f"fact({e.arg.to_text(var)})"
    if isinstance(e, Binom):
        return f"binom({e.top.to_text(var)},{e.bottom.to_text(var)})"
    if isinstance(e, Geom):
        return f"pow({format_rational(e.base)},{var})"
    if isinstance(e, Harmonic):
        return f"H({var})"
    if isinstance(e, GenHarmonic):
        return f"H({var};{e.order})"
    if isinstance(e, Derangement):
        return f"D({var})"
    if isinstance(e, ZetaPartial):
        return f"zeta({var};{e.s})"
    if isinstance(e, PrefixSym):
        return f"S({var})"
    raise TypeError(f"unknown node {e!r}")


def _latex_linear(lin: Linear, var: str) -> str:
    if lin.a == 0:
        return str(lin.b)
    head = var if lin.a == 1 else f"-{var}" if lin.a == -1 else f"{lin.a}{var}"
    if lin.b == 0:
        return head
    return f"{head}{'+' if lin.b > 0 else '-'}{abs(lin.b)}"


def _latex_const(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def to_latex(e: Expr, var: str = "k") -> str:
    t = lambda x: to_latex(x, var)  # noqa: E731
    if isinstance(e, Const):
        return _latex_const(e.value)
    if isinstance(e, Var):
        return var
    if isinstance(e, Add):
        out = []
        for i, term in enumerate(e.terms):
            if i > 0 and isinstance(term, Neg):
                s = t(term.arg)
                if isinstance(term.arg, Add):
                    s = f"\\left({s}\\right)"
                out.append(f" - {s}")
            else:
                s = t(term)
                if isinstance(term, Add):
                    s = f"\\left({s}\\right)"
                out.append(s if i == 0 else f" + {s}")
        return "".join(out)
    if isinstance(e, Mul):
        out = ""
        for i, f in enumerate(e.factors):
            s = t(f)
            if isinstance(f, (Add, Neg)):
                s = f"\\left({s}\\right)"
            if i:
                out += " " if isinstance(e.factors[i - 1], Const) and not isinstance(f, Const) else " \\cdot "
            out += s
        return out
    if isinstance(e, Div):
        return f"\\frac{{{t(e.num)}}}{{{t(e.den)}}}"
    if isinstance(e, Neg):
        s = t(e.arg)
        if isinstance(e.arg, (Add, Neg)):
            s = f"\\left({s}\\right)"
        return f"-{s}"
    if isinstance(e, Pow):
        b = t(e.base)
        if not isinstance(e.base, (Var, Harmonic, GenHarmonic, Derangement, ZetaPartial, PrefixSym, Binom)) and not _is_natural(e.base):
            b = f"\\left({b}\\right)"
        return f"{b}^{{{e.exp}}}"
    if isinstance(e, Fact):
        inner = _latex_linear(e.arg, var)
        return f"{inner}!" if e.arg.b == 0 and e.arg.a in (0, 1) else f"({inner})!"
    if isinstance(e, Binom):
        return f"\\binom{{{_latex_linear(e.top, var)}}}{{{_latex_linear(e.bottom, var)}}}"
    if isinstance(e, Geom):
        b = _latex_const(e.base)
        if e.base < 0 or e.base.denominator != 1:
            b = f"\\left({b}\\right)"
        return f"{b}^{{{var}}}"
    if isinstance(e, Harmonic):
        return f"H_{{{var}}}"
    if isinstance(e, GenHarmonic):
        return f"H^{{({e.order})}}_{{{var}}}"
    if isinstance(e, Derangement):
        return f"D_{{{var}}}"
    if isinstance(e, ZetaPartial):
        return f"\\zeta_{{{var}}}({e.s})"
    if isinstance(e, PrefixSym):
        return f"s_{{{var}}}"
    raise TypeError(f"unknown node {e!r}")

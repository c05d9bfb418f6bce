"""Karaji's L-summing applied to multiplication tables.

For a term ``t`` with prefix sum ``s`` (so ``s(k) - s(k-1) = t(k)`` and
``s(k0 - 1) = 0``), the order-``m`` multiplier

    R(s, t) = sum_{i=1}^{m} (-1)^(i+1) C(m, i) s^(m-i) t^(i-1)

satisfies ``t R(s, t) = s^m - (s - t)^m``, so summing ``t(k) R(s(k), t(k))``
from ``k0`` to ``n`` telescopes to ``s(n)^m``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import sequences
from .errors import (
    DomainError,
    InvalidPrefixSum,
    NoPrefixSum,
    NotHypergeometric,
    NotPolynomial,
)
from .expr import (
    Add,
    Binom,
    Const,
    Div,
    Expr,
    GenHarmonic,
    Harmonic,
    K,
    Linear,
    Neg,
    Pow,
    eval_term,
    mul,
    power,
    ratfun_expr,
    to_latex,
    to_ratfun,
    to_text,
)
from .gosper import definite_sum
from .poly import Polynomial, format_rational
from .ratfun import RationalFunction

MAX_M = 32
PREFIX_CHECKS = 100

named_sequence_eval = sequences.named_sequence_eval


def r_multiplier(m: int) -> tuple[tuple[int, int, int], ...]:
    """Coefficients of ``R^(m)(s, t)`` as ``(coeff, s_pow, t_pow)`` triples.

    >>> r_multiplier(3)
    ((3, 2, 0), (-3, 1, 1), (1, 0, 2))
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("the multiplier order must be a positive integer")
    if m > MAX_M:
        raise ValueError(f"the multiplier order is capped at {MAX_M}")
    return tuple(((-1) ** (i + 1) * math.comb(m, i), m - i, i - 1) for i in range(1, m + 1))


def eval_multiplier(m: int, s: Fraction, t: Fraction) -> Fraction:
    return sum((c * Fraction(s) ** a * Fraction(t) ** b for c, a, b in r_multiplier(m)), Fraction(0))


# -- prefix pairs ------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixPair:
    """A term together with its prefix sum from ``k0``."""

    t: Expr
    s: Expr
    k0: int = 1
    source: str = "explicit"  # gosper, table or explicit

    def t_at(self, k: int) -> Fraction:
        return eval_term(self.t, k)

    def s_at(self, k: int) -> Fraction:
        return eval_term(self.s, k)

    def validate(self, checks: int = PREFIX_CHECKS) -> None:
        """Raise :class:`InvalidPrefixSum` unless the pair telescopes on the check window."""
        try:
            if self.s_at(self.k0) != self.t_at(self.k0):
                raise InvalidPrefixSum(
                    f"s({self.k0}) = {format_rational(self.s_at(self.k0))} but "
                    f"t({self.k0}) = {format_rational(self.t_at(self.k0))}"
                )
            prev = self.s_at(self.k0)
            for k in range(self.k0 + 1, self.k0 + checks + 1):
                cur = self.s_at(k)
                if cur - prev != self.t_at(k):
                    raise InvalidPrefixSum(f"s({k}) - s({k - 1}) differs from t({k})")
                prev = cur
        except DomainError as exc:
            raise InvalidPrefixSum(f"prefix pair undefined on its range: {exc}") from None


class SumTable:
    """Known prefix sums for terms Gosper cannot sum.

    Built in: ``c/k^m`` sums to ``c*H(k;m)`` from ``k = 1``.  Further entries
    map the canonical text of a term to the text of its prefix sum and are
    checked when they are used.
    """

    def __init__(self):
        self._entries: dict[str, str] = {}
        self._lock = threading.Lock()

    def register(self, t_text: str, s_text: str) -> None:
        from .parser import parse_term

        key = to_text(parse_term(t_text))
        with self._lock:
            self._entries[key] = s_text

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def lookup(self, t: Expr, lower: int) -> Optional[Expr]:
        from .parser import parse_term

        extra = self._entries.get(to_text(t))
        if extra is not None:
            return parse_term(extra)
        if lower != 1:
            return None
        try:
            rf = to_ratfun(t)
        except (NotHypergeometric, DomainError):
            return None
        if not rf.num.is_constant() or rf.den.degree < 1:
            return None
        if rf.den != Polynomial.x() ** rf.den.degree:
            return None
        order = rf.den.degree
        seq = Harmonic() if order == 1 else GenHarmonic(order)
        return mul(Const(rf.num[0]), seq)


SUM_TABLE = SumTable()


def prefix_sum_expr(t: Expr, lower: int = 1, table: SumTable = SUM_TABLE) -> tuple[Optional[Expr], str]:
    """Closed or named form of ``sum_{j=lower}^{k} t(j)`` and where it came from."""
    try:
        s = definite_sum(t, lower)
    except (NotHypergeometric, DomainError):
        s = None
    if s is not None:
        return s, "gosper"
    s = table.lookup(t, lower)
    if s is not None:
        return s, "table"
    return None, ""


def build_prefix_pair(t: Expr, s: Optional[Expr] = None, lower: int = 1,
                      table: SumTable = SUM_TABLE) -> PrefixPair:
    """Pair ``t`` with a prefix sum from Gosper, the sum table or the caller."""
    if s is not None:
        pair = PrefixPair(t, s, lower, "explicit")
    else:
        found, source = prefix_sum_expr(t, lower, table)
        if found is None:
            raise NoPrefixSum(
                f"no prefix sum for {to_text(t)}: Gosper's algorithm finds no hypergeometric "
                "antidifference and no table entry matches; supply one explicitly (--s), "
                "register a table entry, or start from a term Gosper can sum"
            )
        pair = PrefixPair(t, found, lower, source)
    pair.validate()
    return pair


# -- identities -----------------------------------------------------------------------------


@dataclass(frozen=True)
class RawIdentity:
    """``sum_{k=lower}^{n} sum_i coeff_i s(k)^a_i t(k)^b_i = s(n)^m``."""

    m: int
    monomials: tuple  # ((coeff, s_pow, t_pow), ...) of t*R
    pair: PrefixPair

    @property
    def lower(self) -> int:
        return self.pair.k0

    def summand_at(self, k: int) -> Fraction:
        s, t = self.pair.s_at(k), self.pair.t_at(k)
        return sum((Fraction(c) * s**a * t**b for c, a, b in self.monomials), Fraction(0))

    def rhs_at(self, n: int) -> Fraction:
        return self.pair.s_at(n) ** self.m

    def with_monomials(self, monomials) -> "RawIdentity":
        return RawIdentity(self.m, tuple(monomials), self.pair)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "lower": self.lower,
            "summand_monomials": [
                {"coeff": format_rational(Fraction(c)), "s_pow": a, "t_pow": b} for c, a, b in self.monomials
            ],
            "rhs": f"s(n)^{self.m}",
            "t": to_text(self.pair.t),
            "s": to_text(self.pair.s),
        }


def generate_identity(pair: PrefixPair, m: int) -> RawIdentity:
    monos = tuple((c, a, b + 1) for c, a, b in r_multiplier(m))
    return RawIdentity(m, monos, pair)


def _poly_of(e: Expr, what: str) -> Polynomial:
    try:
        rf = to_ratfun(e)
    except (NotHypergeometric, DomainError):
        raise NotPolynomial(f"{what} {to_text(e)} is not a polynomial in k") from None
    if not rf.is_polynomial():
        raise NotPolynomial(f"{what} {to_text(e)} is not a polynomial in k")
    return rf.num


def expand_polynomial_case(pair: PrefixPair, m: int) -> Polynomial:
    """``t(k) R^(m)(s(k), t(k))`` as one polynomial in ``k``."""
    t = _poly_of(pair.t, "term")
    s = _poly_of(pair.s, "prefix sum")
    out = Polynomial.constant(0)
    for c, a, b in generate_identity(pair, m).monomials:
        out = out + s**a * t**b * c
    return out


def binomial_coefficients(p: Polynomial) -> list[Fraction]:
    """``c_j`` with ``p(k) = sum_j c_j C(k, j)``, from forward differences at 0."""
    vals = [p(i) for i in range(max(p.degree, 0) + 1)]
    out = []
    while vals:
        out.append(vals[0])
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return out


def _binomial_coefficients_at(p: Polynomial, x0: int) -> list[Fraction]:
    return binomial_coefficients(p.shift(x0) if x0 else p)


# -- presentation ------------------------------------------------------------------------------


@dataclass(frozen=True)
class PresentedIdentity:
    """``sum_j c_j sum_{k=lower}^{n} u_j(k) = sum_i d_i v_i(n)``.

    ``lhs_terms`` holds ``(c_j, u_j)``, ``rhs_terms`` holds ``(d_i, v_i)``
    with ``v_i`` written in ``k`` and evaluated at ``n``.  The raw left side
    equals ``scale`` times this left side plus the ``moved`` sums, each a
    ``(coeff, summand, closed_form)`` triple.
    """

    lhs_terms: tuple
    rhs_terms: tuple
    raw: RawIdentity
    basis: str
    scale: Fraction = Fraction(1)
    moved: tuple = field(default=())

    @property
    def lower(self) -> int:
        return self.raw.lower

    def lhs_summand_at(self, k: int) -> Fraction:
        return sum((Fraction(c) * eval_term(u, k) for c, u in self.lhs_terms), Fraction(0))

    def rhs_at(self, n: int) -> Fraction:
        return sum((Fraction(d) * eval_term(v, n) for d, v in self.rhs_terms), Fraction(0))

    def with_lhs(self, lhs_terms) -> "PresentedIdentity":
        return PresentedIdentity(tuple(lhs_terms), self.rhs_terms, self.raw, self.basis, self.scale, self.moved)

    def to_text(self) -> str:
        lo = self.lower
        lhs = _join([(c, f"sum({to_text(u)}, k={lo}..n)") for c, u in self.lhs_terms])
        rhs = _join([(d, to_text(v, var="n")) for d, v in self.rhs_terms])
        return f"{lhs} = {rhs}"

    def to_latex(self) -> str:
        lo = self.lower
        lhs = _join_latex([(c, f"\\sum_{{k={lo}}}^{{n}} {_latex_group(u)}") for c, u in self.lhs_terms])
        rhs = _join_latex([(d, _latex_group(v, "n")) for d, v in self.rhs_terms])
        return f"{lhs} = {rhs}"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "lhs_terms": [{"coeff": format_rational(Fraction(c)), "summand": to_text(u)} for c, u in self.lhs_terms],
            "rhs_terms": [{"coeff": format_rational(Fraction(d)), "expr": to_text(v)} for d, v in self.rhs_terms],
            "rhs": _join([(d, to_text(v, var="n")) for d, v in self.rhs_terms]),
            "scale": format_rational(self.scale),
            "moved": [
                {"coeff": format_rational(Fraction(c)), "summand": to_text(u), "closed_form": to_text(v)}
                for c, u, v in self.moved
            ],
        }


def _coef_prefix(c: Fraction, first: bool) -> tuple[str, str]:
    sign = "-" if c < 0 else ("" if first else "+")
    return sign, format_rational(abs(c))


def _join(items) -> str:
    out = []
    for i, (c, body) in enumerate(items):
        c = Fraction(c)
        sign, mag = _coef_prefix(c, i == 0)
        piece = body if abs(c) == 1 else f"{mag}*{body}"
        if i == 0:
            out.append(f"{sign}{piece}")
        else:
            out.append(f" {sign} {piece}")
    return "".join(out) if out else "0"


def _latex_group(e: Expr, var: str = "k") -> str:
    s = to_latex(e, var)
    return f"\\left({s}\\right)" if isinstance(e, (Add, Neg)) else s


def _join_latex(items) -> str:
    out = []
    for i, (c, body) in enumerate(items):
        c = Fraction(c)
        sign = "-" if c < 0 else ("" if i == 0 else "+")
        a = abs(c)
        mag = "" if a == 1 else (str(a.numerator) if a.denominator == 1 else f"\\frac{{{a.numerator}}}{{{a.denominator}}}")
        piece = f"{mag}{body}" if not mag else f"{mag} {body}"
        out.append(f"{sign}{piece}" if i == 0 else f" {sign} {piece}")
    return "".join(out) if out else "0"


def monomial_expr(pair: PrefixPair, a: int, b: int) -> Expr:
    """``s(k)^a t(k)^b`` as a tidy expression."""
    sp = power(pair.s, a)
    try:
        rf = to_ratfun(pair.t) ** b
    except (NotHypergeometric, DomainError):
        return mul(sp, power(pair.t, b))
    try:
        return ratfun_expr(rf * to_ratfun(pair.s) ** a)
    except (NotHypergeometric, DomainError):
        pass
    e = ratfun_expr(rf)
    sign = 1
    if isinstance(e, Neg):
        sign, e = -1, e.arg
    if isinstance(e, Div):
        e = Div(mul(e.num, sp), e.den)
    else:
        e = mul(e, sp)
    return Neg(e) if sign < 0 else e


def _present_general(raw: RawIdentity, table: SumTable) -> PresentedIdentity:
    pair = raw.pair
    keep, moved = [], []
    for c, a, b in raw.monomials:
        summand = monomial_expr(pair, a, b)
        if a == 0:
            closed, _ = prefix_sum_expr(summand, pair.k0, table)
            if closed is not None:
                moved.append((Fraction(c), summand, closed))
                continue
        keep.append((Fraction(c), summand))
    if not keep:
        # moving everything would leave an empty left side
        keep = [(c, u) for c, u, _ in moved]
        moved = []
    lead = keep[0][0]
    lhs = tuple((c / lead, u) for c, u in keep)
    rhs = [(1 / lead, power(pair.s, raw.m))]
    rhs += [(-c / lead, closed) for c, _, closed in moved]
    return PresentedIdentity(lhs, tuple(rhs), raw, "named", lead, tuple(moved))


def _power_presentation(raw: RawIdentity, summand: Polynomial) -> PresentedIdentity:
    lhs = []
    for j in range(summand.degree, -1, -1):
        c = summand[j]
        if c:
            lhs.append((c, Const(1) if j == 0 else K if j == 1 else Pow(K, j)))
    rhs = ((Fraction(1), power(raw.pair.s, raw.m)),)
    return PresentedIdentity(tuple(lhs), rhs, raw, "power")


def _binomial_presentation(raw: RawIdentity, summand: Polynomial) -> Optional[PresentedIdentity]:
    coeffs = binomial_coefficients(summand)
    terms = [(c, j) for j, c in enumerate(coeffs) if c and j >= 1]
    if not terms:
        return None
    lead = terms[-1][0]
    lo = raw.lower
    n = Polynomial.x()
    c0 = coeffs[0] if coeffs else Fraction(0)
    s_poly = _poly_of(raw.pair.s, "prefix sum")
    moved_poly = (n + (1 - lo)) * c0
    q = (s_poly**raw.m - moved_poly) * (1 / lead)
    # q(n) = sum_j d_j C(n+1, j); differences of q taken from n = -1
    d = _binomial_coefficients_at(q, -1)
    lhs = tuple((c / lead, Binom(Linear(1, 0), Linear(0, j))) for c, j in reversed(terms))
    rhs = []
    for j in range(len(d) - 1, -1, -1):
        if d[j]:
            rhs.append((d[j], Const(1) if j == 0 else Binom(Linear(1, 1), Linear(0, j))))
    moved = ((c0, Const(1), poly_moved_expr(lo)),) if c0 else ()
    return PresentedIdentity(lhs, tuple(rhs) or ((Fraction(0), Const(0)),), raw, "binomial", lead, moved)


def poly_moved_expr(lower: int) -> Expr:
    """``sum_{j=lower}^{k} 1`` as an expression."""
    from .expr import add

    return add(K, Const(1 - lower))


def present_identity(raw: RawIdentity, basis: str = "auto", table: SumTable = SUM_TABLE) -> PresentedIdentity:
    """Normal-form presentation of ``raw``.

    Polynomial pairs are written in the power basis ``k^j`` or the binomial
    basis ``C(k, j)``; ``auto`` takes the binomial one only when it needs
    strictly fewer sums.  Other pairs move pure ``t``-power sums with a known
    closed form to the right and scale the first remaining sum to 1.
    """
    if basis not in ("auto", "power", "binomial"):
        raise ValueError(f"unknown basis {basis!r}")
    try:
        summand = expand_polynomial_case(raw.pair, raw.m)
    except NotPolynomial:
        return _present_general(raw, table)
    power_form = _power_presentation(raw, summand)
    if basis == "power":
        return power_form
    binom_form = _binomial_presentation(raw, summand)
    if binom_form is None:
        return power_form
    if basis == "binomial":
        return binom_form
    nonconst = sum(1 for _, u in power_form.lhs_terms if not isinstance(u, Const))
    return binom_form if len(binom_form.lhs_terms) < nonconst else power_form


# -- convenience -------------------------------------------------------------------------------


def raw_text(raw: RawIdentity) -> str:
    items = []
    for c, a, b in raw.monomials:
        items.append((Fraction(c), f"sum({to_text(monomial_expr(raw.pair, a, b))}, k={raw.lower}..n)"))
    return f"{_join(items)} = {to_text(power(raw.pair.s, raw.m), var='n')}"


def multiplier_check_pairs() -> list[PrefixPair]:
    """Small fixed prefix pairs used to test multiplier formulas."""
    from .expr import Binom

    return [
        PrefixPair(Const(1), K, 1),
        PrefixPair(K, Binom(Linear(1, 1), Linear(0, 2)), 1),
        PrefixPair(Div(Const(1), K), Harmonic(), 1),
    ]


def identity_family(t: Expr, ms: Sequence[int], s: Optional[Expr] = None, lower: int = 1,
                    basis: str = "auto") -> list[tuple[RawIdentity, PresentedIdentity]]:
    pair = build_prefix_pair(t, s, lower)
    out = []
    for m in ms:
        raw = generate_identity(pair, m)
        out.append((raw, present_identity(raw, basis)))
    return out


__all__ = [
    "MAX_M",
    "PrefixPair",
    "PresentedIdentity",
    "RawIdentity",
    "SUM_TABLE",
    "SumTable",
    "binomial_coefficients",
    "build_prefix_pair",
    "eval_multiplier",
    "expand_polynomial_case",
    "generate_identity",
    "identity_family",
    "monomial_expr",
    "multiplier_check_pairs",
    "named_sequence_eval",
    "prefix_sum_expr",
    "present_identity",
    "r_multiplier",
    "raw_text",
]

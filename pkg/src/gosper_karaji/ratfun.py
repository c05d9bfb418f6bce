"""Reduced quotients of rational polynomials."""

from __future__ import annotations

from fractions import Fraction

from .errors import ZeroDenominator
from .poly import Polynomial, as_fraction, poly_gcd, poly_shift


class RationalFunction:
    """``num / den`` with ``gcd(num, den) = 1`` and ``den`` monic.

    Built through :func:`ratfun_normalize`, so two equal rational functions
    always compare equal structurally.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if den is None:
            den = Polynomial.constant(1)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def x(cls) -> RationalFunction:
        return cls(Polynomial.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Polynomial)):
            return self == RationalFunction(other)
        return NotImplemented

    def __hash__(self):
        return hash(("RationalFunction", self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        return self.to_string()

    def to_string(self, var: str = "n") -> str:
        if self.den == 1:
            return self.num.to_string(var)
        num = self.num.to_string(var)
        den = self.den.to_string(var)
        if self.num.degree > 0 and len([c for c in self.num.coeffs if c]) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    @staticmethod
    def _coerce(other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(other)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(1) / (self ** (-e))
        return RationalFunction(self.num**e, self.den**e)

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDenominator(f"pole at {x}")
        return self.num(x) / d

    def shift(self, j) -> RationalFunction:
        return RationalFunction(poly_shift(self.num, j), poly_shift(self.den, j))


def _normalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise ZeroDenominator("rational function with zero denominator")
    if num.is_zero():
        return Polynomial(), Polynomial.constant(1)
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    lead = den.lc
    return num * (1 / lead), den * (1 / lead)


def ratfun_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Cancel the polynomial gcd and fold the denominator's leading coefficient into ``num``."""
    return RationalFunction(num, den)

"""Dense univariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` values stored lowest degree
first.  Instances are immutable and hashable, so they can be shared freely
between threads and used as dictionary keys.

Besides ring arithmetic the module provides the handful of operations the
Gosper machinery needs: monic gcd, shifts ``p(n) -> p(n + j)``, the
resultant (fraction-free subresultant remainder sequence), integer roots by
the rational-root theorem and the dispersion set of two polynomials.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import ResourceLimit

MAX_DEGREE = 64
MAX_COEFF_BITS = 16384

# divisor scans above this size are refused rather than run for minutes
_MAX_ROOT_SCAN = 2_000_000


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Serialize as ``"num/den"``, omitting the denominator when it is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


class Polynomial:
    """A polynomial in one formal variable with exact rational coefficients.

    The zero polynomial has an empty coefficient tuple and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) - 1 > MAX_DEGREE:
            raise ResourceLimit(f"polynomial degree {len(cs) - 1} exceeds cap {MAX_DEGREE}")
        for c in cs:
            if c.numerator.bit_length() > MAX_COEFF_BITS or c.denominator.bit_length() > MAX_COEFF_BITS:
                raise ResourceLimit(f"coefficient bit length exceeds cap {MAX_COEFF_BITS}")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def x(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @classmethod
    def linear(cls, a, b) -> Polynomial:
        """The polynomial ``a*x + b``."""
        return cls((b, a))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Polynomial:
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-as_fraction(r), 1))
        return p

    # -- basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return self.to_string()

    def to_string(self, var: str = "n") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = as_fraction(other)
            return Polynomial(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lc
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quo[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quo), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Polynomial:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: Polynomial) -> bool:
        """True when ``self`` divides ``other``."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    # -- evaluation and transforms -------------------------------------------

    def __call__(self, x):
        return poly_eval(self, x)

    def monic(self) -> Polynomial:
        if not self.coeffs:
            return self
        return self * (1 / self.lc)

    def shift(self, j) -> Polynomial:
        return poly_shift(self, j)

    def scale_var(self, a) -> Polynomial:
        """Return ``p(a*x)``."""
        a = as_fraction(a)
        return Polynomial(c * a**i for i, c in enumerate(self.coeffs))

    def compose(self, other: Polynomial) -> Polynomial:
        result = Polynomial()
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` an integer primitive polynomial."""
        if not self.coeffs:
            return Fraction(0)
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(num, den)

    def integer_coeffs(self) -> list[int]:
        """Primitive integer form with positive leading coefficient."""
        if not self.coeffs:
            return []
        c = self.content()
        if self.lc < 0:
            c = -c
        return [int(a / c) for a in self.coeffs]

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> Polynomial:
        return cls(parse_rational(s) for s in data)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def poly_eval(p: Polynomial, x) -> Fraction:
    """Horner evaluation at an exact rational point."""
    x = as_fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_shift(p: Polynomial, j) -> Polynomial:
    """Return ``p(n + j)`` expanded in the monomial basis."""
    j = as_fraction(j)
    if j == 0 or p.degree < 1:
        return p
    # Horner in the shifted variable: p(n + j) = (...(c_d (n+j) + c_{d-1})(n+j) ...)
    out: list[Fraction] = []
    for c in reversed(p.coeffs):
        nxt = [Fraction(0)] * (len(out) + 1)
        for i, a in enumerate(out):
            nxt[i + 1] += a
            nxt[i] += a * j
        nxt[0] += c
        out = nxt
    return Polynomial(out)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor; ``gcd(0, 0)`` is the zero polynomial."""
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


# -- resultants -----------------------------------------------------------------


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (lowest degree first)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, c in enumerate(b):
            r[shift + i] -= lr * c
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        f = lb**e
        r = [f * c for c in r]
    return r


def _int_content(a: list[int]) -> int:
    return reduce(math.gcd, a, 0)


def _int_resultant(a: list[int], b: list[int]) -> int:
    """Subresultant PRS resultant of nonconstant integer polynomials."""
    da, db = len(a) - 1, len(b) - 1
    ca, cb = _int_content(a), _int_content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 == 1 and db % 2 == 1:
            s = -1
    g = h = 1
    while True:
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = _int_prem(a, b)
        a = b
        da = db
        if not r:
            return 0
        div = g * h**delta
        b = [c // div for c in r]
        db = len(b) - 1
        g = a[-1]
        # h <- h^(1 - delta) * g^delta, an exact division for delta >= 1
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if db <= 0:
            break
    # b is a nonzero constant here
    h = b[-1] ** da // h ** (da - 1) if da >= 1 else h
    return s * t * h


def resultant(a: Polynomial, b: Polynomial) -> Fraction:
    """Resultant of two polynomials over the rationals.

    Constants follow the usual conventions: ``Res(a, c) = c**deg(a)``.
    """
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    if a.degree == 0:
        return a.lc**b.degree
    if b.degree == 0:
        return b.lc**a.degree
    da_den = reduce(_lcm, (c.denominator for c in a.coeffs), 1)
    db_den = reduce(_lcm, (c.denominator for c in b.coeffs), 1)
    ai = [int(c * da_den) for c in a.coeffs]
    bi = [int(c * db_den) for c in b.coeffs]
    res = _int_resultant(ai, bi)
    return Fraction(res, da_den**b.degree * db_den**a.degree)


def interpolate(points: Sequence[tuple]) -> Polynomial:
    """Newton interpolation through exact ``(x, y)`` points."""
    xs = [as_fraction(x) for x, _ in points]
    table = [as_fraction(y) for _, y in points]
    coeffs = [table[0]]
    for level in range(1, len(xs)):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(len(table) - 1)
        ]
        coeffs.append(table[0])
    result = Polynomial()
    for level in range(len(coeffs) - 1, -1, -1):
        result = result * Polynomial((-xs[level], 1)) + coeffs[level]
    return result


# -- integer roots and dispersion ---------------------------------------------


def _iroot_ceil(x: int, k: int) -> int:
    """Smallest integer r >= 0 with r**k >= x."""
    if x <= 0:
        return 0
    r = int(round(x ** (1.0 / k))) if x.bit_length() < 1000 else 1 << (x.bit_length() // k + 1)
    while r**k < x:
        r += 1
    while r > 0 and (r - 1) ** k >= x:
        r -= 1
    return r


def _root_bound(ints: list[int]) -> int:
    """Fujiwara-style integer bound on the modulus of every root."""
    n = len(ints) - 1
    lead = abs(ints[-1])
    best = 0
    for i in range(1, n + 1):
        ratio = -(-abs(ints[n - i]) // lead)
        best = max(best, _iroot_ceil(ratio, i))
    return 2 * best


def _divisors_up_to(a0: int, limit: int) -> Iterable[int]:
    a0 = abs(a0)
    limit = min(limit, a0)
    if limit <= _MAX_ROOT_SCAN:
        return (d for d in range(1, limit + 1) if a0 % d == 0)
    root = math.isqrt(a0)
    if root > _MAX_ROOT_SCAN:
        raise ResourceLimit("integer-root search space too large")
    small = [d for d in range(1, root + 1) if a0 % d == 0]
    divs = set(small) | {a0 // d for d in small}
    return sorted(d for d in divs if d <= limit)


def integer_roots(p: Polynomial) -> list[int]:
    """All integer roots (any sign) in ascending order, without multiplicity."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every integer as a root")
    ints = p.integer_coeffs()
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(0)
    ints = ints[low:]
    if len(ints) > 1:
        bound = _root_bound(ints)
        for d in _divisors_up_to(ints[0], bound):
            for cand in (d, -d):
                acc = 0
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.add(cand)
    return sorted(roots)


def nonneg_integer_roots(p: Polynomial) -> list[int]:
    """Nonnegative integer roots via the rational-root theorem, ascending."""
    return [r for r in integer_roots(p) if r >= 0]


def dispersion_resultant(q: Polynomial, r: Polynomial) -> Polynomial:
    """``Res_n(q(n), r(n + j))`` as a polynomial in ``j``.

    The resultant has degree at most ``deg q * deg r`` in ``j``; it is
    recovered by interpolation through that many exact evaluations.
    """
    d = q.degree * r.degree
    pts = [(j, resultant(q, poly_shift(r, j))) for j in range(d + 1)]
    return interpolate(pts)


def dispersion_candidates(q: Polynomial, r: Polynomial) -> list[int]:
    """Every ``j >= 0`` for which ``gcd(q(n), r(n + j))`` is nonconstant."""
    if q.is_zero() or r.is_zero():
        raise ValueError("dispersion of the zero polynomial is undefined")
    if q.degree < 1 or r.degree < 1:
        return []
    res = dispersion_resultant(q, r)
    if res.is_zero():
        # q and r share a factor at every shift; only possible for equal constants
        raise ArithmeticError("resultant vanishes identically")
    return nonneg_integer_roots(res)

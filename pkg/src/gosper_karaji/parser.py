"""Recursive-descent parser for the term language.

Grammar (whitespace is ignored, implicit multiplication is not allowed)::

    expr   := mul (('+' | '-') mul)*
    mul    := unary (('*' | '/') unary)*
    unary  := '-' unary | atom ['^' ['-'] integer]
    atom   := integer | 'k' | '(' expr ')'
            | 'fact(' linear ')' | 'binom(' linear ',' linear ')'
            | 'pow(' rational ',' 'k' ')'
            | 'H(k)' | 'H(k;' integer ')' | 'D(k)' | 'zeta(k;' integer ')'
            | 'S(k)'

``linear`` is any sub-expression that reduces to ``a*k + b`` with integer
``a`` and ``b``.  Two literal-only folds keep constants canonical: a unary
minus applied to a constant and a quotient of two constants both become a
single :class:`~gosper_karaji.expr.Const`, and subtracting a constant adds
its negation.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NotHypergeometric, ParseError
from .expr import (
    Add,
    Binom,
    Const,
    Derangement,
    Div,
    Expr,
    Fact,
    GenHarmonic,
    Geom,
    Harmonic,
    Linear,
    Mul,
    Neg,
    Pow,
    PrefixSym,
    Var,
    ZetaPartial,
    to_ratfun,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_FUNCS = ("fact", "binom", "pow", "H", "D", "zeta", "S")
_ATOM_START = {"integer", "k", "(", "-"} | set(_FUNCS)
_OPS = {"+", "-", "*", "/", "^"}


class _Tok:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind = kind
        self.text = text
        self.offset = offset


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    # byte offsets: the grammar is ASCII, but report positions faithfully for any input
    byte_at = lambda i: len(text[:i].encode("utf-8"))  # noqa: E731
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("integer", m.group(1), byte_at(m.start(1))))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), byte_at(m.start(2))))
        elif m.group(3) is not None:
            toks.append(_Tok(m.group(3), m.group(3), byte_at(m.start(3))))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text.encode("utf-8"))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, message, expected=()):
        raise ParseError(message, self.tok.offset, expected)

    def expect(self, kind, expected_extra=()):
        if self.tok.kind != kind:
            got = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            self.fail(f"unexpected {got}", {kind, *expected_extra})
        return self.advance()

    def expect_name(self, name):
        if not (self.tok.kind == "name" and self.tok.text == name):
            self.fail(f"expected {name!r}", {name})
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.fail(f"unexpected {self.tok.text!r}", _OPS | {"end of input"})
        return e

    def expr(self) -> Expr:
        terms = [self.mul()]
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.mul()
            if op == "-":
                rhs = Const(-rhs.value) if isinstance(rhs, Const) else Neg(rhs)
            terms.append(rhs)
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def mul(self) -> Expr:
        acc = self.unary()
        chain = False
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.unary()
            if op == "*":
                acc = Mul(acc.factors + (rhs,)) if chain else Mul((acc, rhs))
                chain = True
            else:
                if isinstance(acc, Const) and isinstance(rhs, Const):
                    if rhs.value == 0:
                        self.fail("division by the constant zero")
                    acc = Const(acc.value / rhs.value)
                else:
                    acc = Div(acc, rhs)
                chain = False
        return acc

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            arg = self.unary()
            return Const(-arg.value) if isinstance(arg, Const) else Neg(arg)
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "-":
                self.advance()
                sign = -1
            n = self.expect("integer")
            return Pow(base, sign * int(n.text))
        return base

    def var(self):
        if not (self.tok.kind == "name" and self.tok.text == "k"):
            self.fail("expected the summation variable", {"k"})
        self.advance()

    def linear(self) -> Linear:
        start = self.tok.offset
        e = self.expr()
        try:
            rf = to_ratfun(e)
        except NotHypergeometric:
            raise ParseError("argument must be linear in k", start) from None
        p = rf.num
        if rf.den != 1 or p.degree > 1 or any(c.denominator != 1 for c in p.coeffs):
            raise ParseError("argument must be linear in k with integer coefficients", start)
        return Linear(int(p[1]), int(p[0]))

    def rational(self) -> Fraction:
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        num = int(self.expect("integer", {"-"}).text)
        den = 1
        if self.tok.kind == "/":
            self.advance()
            den = int(self.expect("integer").text)
            if den == 0:
                self.fail("zero denominator in rational literal")
        return Fraction(sign * num, den)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "integer":
            self.advance()
            return Const(int(t.text))
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")", _OPS)
            return e
        if t.kind != "name":
            got = "end of input" if t.kind == "eof" else repr(t.text)
            self.fail(f"unexpected {got}", _ATOM_START)
        name = t.text
        if name == "k":
            self.advance()
            return Var()
        if name not in _FUNCS:
            self.fail(f"unknown name {name!r}", _ATOM_START)
        self.advance()
        self.expect("(")
        if name == "fact":
            arg = self.linear()
            self.expect(")", _OPS)
            if arg.a < 0:
                raise ParseError("factorial argument needs a nonnegative k coefficient", t.offset)
            return Fact(arg)
        if name == "binom":
            top = self.linear()
            self.expect(",", _OPS)
            bottom = self.linear()
            self.expect(")", _OPS)
            return Binom(top, bottom)
        if name == "pow":
            base_at = self.tok.offset
            base = self.rational()
            if base == 0:
                raise ParseError("geometric base must be nonzero", base_at)
            self.expect(",")
            self.var()
            self.expect(")")
            return Geom(base)
        self.var()
        if name == "H" and self.tok.kind == ";":
            self.advance()
            order = int(self.expect("integer").text)
            if order < 1:
                self.fail("harmonic order must be at least 1")
            self.expect(")")
            return GenHarmonic(order)
        if name == "zeta":
            self.expect(";")
            s = int(self.expect("integer").text)
            if s < 1:
                self.fail("zeta order must be at least 1")
            self.expect(")")
            return ZetaPartial(s)
        self.expect(")", {";"} if name == "H" else ())
        return {"H": Harmonic, "D": Derangement, "S": PrefixSym}[name]()


def parse_term(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    >>> from gosper_karaji.expr import to_text
    >>> to_text(parse_term("(4*k+1)*fact(k)/fact(2*k+1)"))
    '(4*k + 1)*fact(k)/fact(2*k+1)'
    """
    return _Parser(text).parse()

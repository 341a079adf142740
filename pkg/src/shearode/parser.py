"""Recursive-descent parser for the coefficient expression language.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+')? base ('^' int)?
    base   := rational | 'i' | name | '(' expr ')'
    int    := '-'? digits

Division by a non-constant and negative powers expand as power series in
``y`` through the given truncation order.  The unary sign on ``factor`` is
an extension so that printed polynomials round-trip.
"""

from __future__ import annotations

import re
from typing import List, Sequence, Tuple

from .errors import ExprSyntaxError, ZeroConstantTerm
from .gauss import I, as_scalar, to_gauss
from .poly import DEFAULT_TRUNCATION, TruncPoly, const, series_invert, var

__all__ = ["parse_expr", "parse_poly", "parse_scalar", "format_expr"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, variables: Sequence[str], trunc: int):
        self.tokens = _tokenize(src)
        self.i = 0
        self.variables = tuple(variables)
        self.trunc = trunc

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        t = self.tok
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value or kind
            got = t[1] or "end of input"
            raise ExprSyntaxError(f"expected {want!r}, got {got!r}", t[2])
        self.i += 1
        return t

    def parse(self) -> TruncPoly:
        if self.tok[0] == "end":
            raise ExprSyntaxError("empty expression", 0)
        out = self.expr()
        if self.tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return out

    def expr(self):
        out = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            _, op, pos = self.take()
            rhs = self.factor()
            out = out * rhs if op == "*" else self.divide(out, rhs, pos)
        return out

    def factor(self):
        sign = 1
        if self.tok[0] == "op" and self.tok[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        pos = self.tok[2]
        base = self.base()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            neg = False
            if self.tok[0] == "op" and self.tok[1] == "-":
                self.take()
                neg = True
            n = int(self.take("int")[1])
            if neg:
                base = self.invert(base, pos) ** n
            else:
                base = base**n
        return base if sign == 1 else -base

    def base(self):
        kind, value, pos = self.tok
        if kind == "int":
            self.take()
            return const(int(value))
        if kind == "name":
            self.take()
            if value == "i":
                return const(I)
            if value not in self.variables:
                raise ExprSyntaxError(f"unknown variable {value!r}", pos)
            return var(value)
        if kind == "op" and value == "(":
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ExprSyntaxError(f"unexpected {value or 'end of input'!r}", pos)

    def invert(self, q: TruncPoly, pos: int) -> TruncPoly:
        if not q.free_vars():
            c = q.coeff({})
            if not c:
                raise ZeroConstantTerm(f"division by zero at position {pos}")
            return const(1 / to_gauss(c))
        if any(v != "y" for v in q.free_vars()):
            raise ExprSyntaxError("division is only defined by scalars or series in y", pos)
        try:
            return series_invert(q.with_trunc(self.trunc), self.trunc)
        except ZeroConstantTerm as exc:
            raise ZeroConstantTerm(f"divisor has zero constant term (at position {pos})") from exc

    def divide(self, num: TruncPoly, den: TruncPoly, pos: int) -> TruncPoly:
        return num * self.invert(den, pos)


def parse_poly(src: str, variables: Sequence[str] = ("y",), trunc: int = DEFAULT_TRUNCATION) -> TruncPoly:
    """Parse ``src`` over the allowed ``variables``."""
    return _Parser(src, variables, trunc).parse()


def parse_expr(src: str, trunc: int = DEFAULT_TRUNCATION) -> TruncPoly:
    """Parse a univariate expression in ``y``.

    The result is an exact polynomial unless a series expansion was needed,
    in which case it is known modulo ``y**(trunc+1)``.
    """
    return parse_poly(src, ("y",), trunc)


def parse_scalar(src: str):
    p = parse_poly(src, ())
    return as_scalar(p.coeff({}))


def format_expr(p: TruncPoly) -> str:
    return p.to_expr()

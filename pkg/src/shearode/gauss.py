"""Exact complex scalars with rational real and imaginary parts."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["GaussRational", "I", "as_scalar", "to_gauss", "exact_sqrt", "scalar_str"]


class GaussRational:
    """``re + im*i`` with ``re``, ``im`` in lowest terms.

    Instances are immutable.  Arithmetic with ``int`` and ``Fraction`` is
    supported on both sides.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @staticmethod
    def parse_pair(value):
        if isinstance(value, GaussRational):
            return value.re, value.im
        if isinstance(value, (int, Fraction)):
            return Fraction(value), Fraction(0)
        if isinstance(value, Rational):
            return Fraction(value.numerator, value.denominator), Fraction(0)
        return None

    def __add__(self, other):
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        return GaussRational._make(self.re + pair[0], self.im + pair[1])

    __radd__ = __add__

    def __sub__(self, other):
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        return GaussRational._make(self.re - pair[0], self.im - pair[1])

    def __rsub__(self, other):
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        return GaussRational._make(pair[0] - self.re, pair[1] - self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRational._make(self.re * other, self.im * other)
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = pair
        return GaussRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational._make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussRational division by zero")
            return GaussRational._make(self.re / other, self.im / other)
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        return self * GaussRational._make(*pair).inverse()

    def __rtruediv__(self, other):
        pair = self.parse_pair(other)
        if pair is None:
            return NotImplemented
        return GaussRational._make(*pair) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussRational._make(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return GaussRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        pair = self.parse_pair(other)
        if pair is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == pair[0] and self.im == pair[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussRational._make(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self):
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return scalar_str(self)


I = GaussRational(0, 1)


def to_gauss(value) -> GaussRational:
    """Coerce int, Fraction, str or GaussRational to a GaussRational."""
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, str):
        from .parser import parse_scalar

        return to_gauss(parse_scalar(value))
    pair = GaussRational.parse_pair(value)
    if pair is None:
        raise TypeError(f"cannot coerce {value!r} to an exact scalar")
    return GaussRational._make(*pair)


def as_scalar(value):
    """Canonical storage form: ``Fraction`` when real, else ``GaussRational``.

    Polynomial coefficients are kept in this form so real data runs at
    plain ``Fraction`` speed.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, GaussRational):
        return value.re if value.im == 0 else value
    if isinstance(value, str):
        return as_scalar(to_gauss(value))
    pair = GaussRational.parse_pair(value)
    if pair is None:
        raise TypeError(f"cannot coerce {value!r} to an exact scalar")
    return pair[0]


def _sqrt_fraction(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(value):
    """A square root inside Q(i), or ``None`` when there is none."""
    z = to_gauss(value)
    a, b = z.re, z.im
    if b == 0:
        r = _sqrt_fraction(a)
        if r is not None:
            return as_scalar(r)
        r = _sqrt_fraction(-a)
        return None if r is None else GaussRational._make(Fraction(0), r)
    modulus = _sqrt_fraction(a * a + b * b)
    if modulus is None:
        return None
    u = _sqrt_fraction((a + modulus) / 2)
    if u is None or u == 0:
        return None
    root = GaussRational._make(u, b / (2 * u))
    return root if root * root == z else None


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_str(value) -> str:
    """Parser-compatible text for an exact scalar, e.g. ``-3/2``, ``(1/2+3*i)``."""
    z = to_gauss(value)
    re, im = z.re, z.im
    if im == 0:
        return _frac_str(re)
    if im == 1:
        im_part = "i"
    elif im == -1:
        im_part = "-i"
    else:
        im_part = f"{_frac_str(im)}*i"
    if re == 0:
        return im_part
    sign = "" if im_part.startswith("-") else "+"
    return f"({_frac_str(re)}{sign}{im_part})"

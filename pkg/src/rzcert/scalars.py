"""Coefficient domains shared by every module.

Two modes are supported throughout the package:

* ``"rational"`` -- exact arithmetic. Real values are ``fractions.Fraction``;
  values with an imaginary part are :class:`QQi` (Gaussian rationals).
  Results with a vanishing imaginary part are demoted back to ``Fraction``.
* ``"float"`` -- double precision, stored as Python ``complex``.
"""

from __future__ import annotations

import math
from fractions import Fraction

RATIONAL = "rational"
FLOAT = "float"

_EXACT_REALS = (int, Fraction)


class QQi:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    def _coerce(self, other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, _EXACT_REALS):
            return QQi(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * o.re + self.im * o.im) / den,
                   (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = QQi(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, QQi):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _EXACT_REALS):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def demote(c):
    """Collapse a QQi with zero imaginary part to a plain Fraction."""
    if isinstance(c, QQi) and c.im == 0:
        return c.re
    return c


def exact(value, imag=0):
    """Build an exact scalar from ints/Fractions/strings; QQi only if needed."""
    if isinstance(value, QQi):
        c = value if imag == 0 else QQi(value.re, value.im + Fraction(imag))
        return demote(c)
    re = value if isinstance(value, Fraction) else Fraction(value)
    im = imag if isinstance(imag, Fraction) else Fraction(imag)
    if im == 0:
        return re
    return QQi(re, im)


def conj(c):
    if isinstance(c, (QQi, complex)):
        return c.conjugate()
    return c


def real_part(c):
    if isinstance(c, QQi):
        return c.re
    if isinstance(c, complex):
        return c.real
    return c


def imag_part(c):
    if isinstance(c, QQi):
        return c.im
    if isinstance(c, complex):
        return c.imag
    return 0


def is_zero(c):
    return not c


def to_complex(c):
    return complex(c)


def abs2(c):
    """|c|^2 in the scalar's own arithmetic."""
    if isinstance(c, QQi):
        return c.re * c.re + c.im * c.im
    if isinstance(c, complex):
        return c.real * c.real + c.imag * c.imag
    return c * c


def magnitude(c):
    return abs(complex(c))


def invert(c):
    if isinstance(c, QQi):
        return demote(QQi(1) / c)
    if isinstance(c, Fraction):
        return Fraction(1) / c
    if isinstance(c, int):
        return Fraction(1, c)
    return 1.0 / c


def rational_sqrt(f):
    """Exact square root of a nonnegative Fraction, or None if irrational."""
    f = Fraction(f)
    if f < 0:
        return None
    if f == 0:
        return Fraction(0)
    ns = math.isqrt(f.numerator)
    ds = math.isqrt(f.denominator)
    if ns * ns == f.numerator and ds * ds == f.denominator:
        return Fraction(ns, ds)
    return None


def format_exact(c):
    """Serialize an exact real scalar as 'num/den' (or plain integer) text."""
    f = Fraction(c)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def scalar_to_json_pair(c, mode):
    """(re, im) pair for JSON: rational strings in exact mode, floats otherwise."""
    if mode == RATIONAL:
        return format_exact(real_part(c)), format_exact(imag_part(c))
    z = complex(c)
    return z.real, z.imag


def scalar_from_json_pair(re, im, mode):
    if mode == RATIONAL:
        return exact(Fraction(str(re)), Fraction(str(im)) if im is not None else 0)
    return complex(float(re), float(im) if im is not None else 0.0)

"""Gaussian rational scalars: the ground field for every computation.

A scalar is re + im*i with re, im exact rationals (stdlib Fraction keeps
numerator/denominator coprime with positive denominator).  The text grammar
is ``a/b``, ``a/b+c/d*i`` or ``a/b-c/d*i`` with denominators omitted when 1,
e.g. ``2``, ``-1/3+1*i``.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction


class ScalarParseError(ValueError):
    """Raised when a scalar string does not match the grammar."""


_FRAC = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = _re.compile(rf"^({_FRAC})(?:([+-])(\d+(?:/\d+)?)\*i)?$")


def _parse_fraction(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Scalar:
    """An element of Q(i), immutable and hashable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- construction -------------------------------------------------

    @staticmethod
    def parse(text: str) -> "Scalar":
        m = _SCALAR_RE.match(text)
        if not m:
            raise ScalarParseError(f"invalid scalar {text!r}")
        re_part = _parse_fraction(m.group(1))
        if m.group(3) is None:
            return Scalar(re_part)
        im_part = _parse_fraction(m.group(3))
        if m.group(2) == "-":
            im_part = -im_part
        return Scalar(re_part, im_part)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if other.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        norm = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def inverse(self) -> "Scalar":
        return ONE / self

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def scale(self, rational) -> "Scalar":
        """Multiply by an exact rational (Fraction or int)."""
        q = Fraction(rational)
        return Scalar(self.re * q, self.im * q)

    # -- predicates / protocol ----------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if not self.im:
            return _format_fraction(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{_format_fraction(self.re)}{sign}{_format_fraction(abs(self.im))}*i"

    def __repr__(self) -> str:
        return f"Scalar({self})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def of(value) -> Scalar:
    """Coerce an int, Fraction, string or Scalar into a Scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return Scalar.parse(value)
    return Scalar(value)

"""Exact arithmetic in a real quadratic extension Q(sqrt D).

A :class:`QuadraticValue` is ``a + b*sqrt(D)`` with rational ``a``, ``b`` and a
rational radicand ``D >= 0``.  Values built on the same radicand form a field;
ordering is decided exactly by isolating the radical and squaring.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from .base import DomainError, InputError

Scalar = Union[int, Fraction]


def _is_square(x: Fraction) -> bool:
    n, d = x.numerator, x.denominator
    return n >= 0 and math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def _frac_sqrt(x: Fraction) -> Fraction:
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadraticValue:
    __slots__ = ("a", "b", "radicand")

    def __init__(self, a: Scalar = 0, b: Scalar = 0, radicand: Scalar = 0):
        a, b, radicand = Fraction(a), Fraction(b), Fraction(radicand)
        if radicand < 0:
            raise DomainError(f"negative radicand {radicand}")
        if b != 0 and _is_square(radicand):
            a += b * _frac_sqrt(radicand)
            b = Fraction(0)
        self.a = a
        self.b = b
        self.radicand = radicand

    @classmethod
    def sqrt_of(cls, radicand: Scalar) -> "QuadraticValue":
        return cls(0, 1, radicand)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "QuadraticValue | None":
        if isinstance(other, QuadraticValue):
            if other.b != 0 and self.b != 0 and other.radicand != self.radicand:
                raise InputError(
                    f"radicand mismatch: {self.radicand} vs {other.radicand}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticValue(other, 0, self.radicand)
        return None

    def _common_radicand(self, other: "QuadraticValue") -> Fraction:
        return self.radicand if self.b != 0 else other.radicand

    # -- field operations -----------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticValue(self.a + o.a, self.b + o.b, self._common_radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticValue(-self.a, -self.b, self.radicand)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticValue(self.a - o.a, self.b - o.b, self._common_radicand(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._common_radicand(o)
        return QuadraticValue(self.a * o.a + self.b * o.b * d,
                              self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticValue":
        return QuadraticValue(self.a, -self.b, self.radicand)

    def norm(self) -> Fraction:
        """a^2 - b^2 D; zero exactly when the value is zero."""
        return self.a * self.a - self.b * self.b * self.radicand

    def inverse(self) -> "QuadraticValue":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadraticValue(self.a / n, -self.b / n, self.radicand)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadraticValue(1, 0, self.radicand)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- ordering -------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of a + b sqrt(D)."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or self.radicand == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        diff = self.a * self.a - self.b * self.b * self.radicand
        return sa * _sign(diff)

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadraticValue with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, float):
            return NotImplemented
        try:
            o = self._coerce(other)
        except InputError:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.radicand))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(float(self.radicand))

    # -- rounding -------------------------------------------------------
    def floor(self) -> int:
        """Exact floor, using an integer square root estimate then correcting."""
        if self.b == 0:
            return math.floor(self.a)
        # b sqrt(D) = sign(b) * sqrt(b^2 D)
        r = self.b * self.b * self.radicand
        n, d = r.numerator, r.denominator
        root_lo = Fraction(math.isqrt(n * d), d)  # <= sqrt(r) < root_lo + 1/d
        est = self.a + root_lo if self.b > 0 else self.a - root_lo
        c = math.floor(est) - 1
        while (self - (c + 1)).sign() >= 0:
            c += 1
        while (self - c).sign() < 0:
            c -= 1
        return c

    def __floor__(self):
        return self.floor()

    def decimal_floor(self, places: int) -> Fraction:
        """Largest multiple of 10^-places not exceeding the value."""
        scale = 10 ** places
        return Fraction((self * scale).floor(), scale)

    def to_decimal(self, places: int) -> str:
        return format_decimal(self.decimal_floor(places), places)

    def __repr__(self):
        if self.b == 0:
            return f"QuadraticValue({self.a})"
        return f"QuadraticValue({self.a} + {self.b}*sqrt({self.radicand}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + ({self.b})*sqrt({self.radicand})"


def format_decimal(x: Fraction, places: int) -> str:
    """Render a rational truncated toward minus infinity at `places` digits."""
    scale = 10 ** places
    n = math.floor(x * scale)
    sign = "-" if n < 0 else ""
    n = abs(n)
    if places == 0:
        return f"{sign}{n}"
    whole, frac = divmod(n, scale)
    return f"{sign}{whole}.{frac:0{places}d}"

"""Exact rationals and outward-rounded enclosures.

Rationals are :class:`fractions.Fraction`.  An :class:`Enclosure` is a closed
interval ``[lo, hi]`` with rational endpoints that is guaranteed to contain
some real quantity.  Arithmetic on enclosures is exact on the endpoints, so the
result always contains the true value; irrational inputs (``q**r`` with ``r``
non-integer, ``n**-p`` with ``p`` non-integer) are produced by ``mpmath.iv``
at a configurable number of bits and then converted exactly.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Union

from mpmath import iv
from mpmath.libmp import to_rational

DEFAULT_PRECISION = 128

Number = Union[int, Fraction, "Enclosure"]


def default_precision() -> int:
    value = os.environ.get("ACHIEVESET_PRECISION")
    if value is None:
        return DEFAULT_PRECISION
    bits = int(value)
    if bits < 64:
        raise ValueError("ACHIEVESET_PRECISION must be at least 64")
    return bits


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction.  Floats are refused."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot read a rational from {type(text).__name__}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _fraction_from_mpf(value) -> Fraction:
    p, q = to_rational(value)
    return Fraction(int(p), int(q))


def _round_down(x: Fraction, bits: int) -> Fraction:
    if x.denominator == 1 or x == 0:
        return x
    shift = bits - (abs(x.numerator).bit_length() - x.denominator.bit_length())
    if shift <= 0:
        return Fraction(x.numerator // x.denominator)
    return Fraction((x.numerator << shift) // x.denominator, 1 << shift)


def _round_up(x: Fraction, bits: int) -> Fraction:
    return -_round_down(-x, bits)


class Enclosure:
    """Closed rational interval known to contain a real number."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"inverted enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # construction -------------------------------------------------------

    @classmethod
    def of(cls, value) -> "Enclosure":
        if isinstance(value, Enclosure):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls(parse_rational(value))
        raise TypeError(f"cannot enclose {type(value).__name__}")

    @classmethod
    def from_iv(cls, value) -> "Enclosure":
        a, b = value._mpi_
        return cls(_fraction_from_mpf(a), _fraction_from_mpf(b))

    def to_iv(self):
        if self.is_exact:
            return _iv_fraction(self.lo)
        lo = _iv_fraction(self.lo)
        hi = _iv_fraction(self.hi)
        return iv.mpf([lo.a, hi.b])

    @classmethod
    def power(cls, base, exponent, prec: int | None = None) -> "Enclosure":
        """Enclosure of ``base ** exponent`` for positive ``base``."""
        base = cls.of(base)
        exponent = cls.of(exponent)
        if exponent.is_exact and exponent.lo.denominator == 1:
            k = int(exponent.lo)
            return base ** k if k >= 0 else (base ** -k).reciprocal()
        if base.lo <= 0:
            raise ValueError("real power of a non-positive base")
        with _precision(prec):
            return cls.from_iv(base.to_iv() ** exponent.to_iv())

    # predicates ---------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("enclosure is not a single rational")
        return self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def sign(self) -> int | None:
        """+1, -1 or 0 when certain, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def contains(self, x) -> bool:
        x = Enclosure.of(x)
        return self.lo <= x.lo and x.hi <= self.hi

    def overlaps(self, other: "Enclosure") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def certainly_gt(self, other) -> bool:
        return self.lo > Enclosure.of(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= Enclosure.of(other).hi

    def certainly_le(self, other) -> bool:
        return self.hi <= Enclosure.of(other).lo

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Enclosure(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return Enclosure(self.lo * other.lo)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure contains zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        if self.is_exact:
            return Enclosure(self.lo ** k)
        if k == 0:
            return Enclosure(1)
        if self.lo >= 0:
            return Enclosure(self.lo ** k, self.hi ** k)
        if self.hi <= 0:
            a, b = (-self.hi) ** k, (-self.lo) ** k
            return Enclosure(a, b) if k % 2 == 0 else Enclosure(-b, -a)
        m = max(-self.lo, self.hi) ** k
        return Enclosure(0, m) if k % 2 == 0 else Enclosure(self.lo ** k, self.hi ** k)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(0, max(-self.lo, self.hi))

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def rounded(self, bits: int) -> "Enclosure":
        """Outward rounding to dyadic endpoints with ``bits`` significant bits."""
        if self.is_exact:
            return self
        return Enclosure(_round_down(self.lo, bits), _round_up(self.hi, bits))

    # dunder -------------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        if self.is_exact:
            return f"Enclosure({self.lo})"
        return f"Enclosure({self.lo}, {self.hi})"


def _coerce(x):
    if isinstance(x, Enclosure):
        return x
    if isinstance(x, (int, Fraction)):
        return Enclosure(x)
    return NotImplemented


def _iv_fraction(x: Fraction):
    if x.denominator == 1:
        return iv.mpf(x.numerator)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


class _precision:
    def __init__(self, bits: int | None):
        self.bits = bits or default_precision()

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.bits

    def __exit__(self, *exc):
        iv.prec = self.saved


def iv_precision(bits: int | None):
    """Context manager setting the ``mpmath.iv`` working precision."""
    return _precision(bits)


def enclosure_to_json(e: Enclosure):
    if e.is_exact:
        return format_rational(e.lo)
    return {"lo": format_rational(e.lo), "hi": format_rational(e.hi)}


def enclosure_from_json(obj) -> Enclosure:
    if isinstance(obj, dict):
        return Enclosure(parse_rational(obj["lo"]), parse_rational(obj["hi"]))
    return Enclosure(parse_rational(obj))

"""Exact scalars: rationals, dyadic rationals and Nim-addition.

Everything numeric in the package is a :class:`fractions.Fraction`; dyadic
rationals ``m/2^n`` get their own small type because Nim-addition and the
potential recurrence work on mantissas at a fixed level.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

RationalLike = Union[int, str, Fraction, "Dyadic"]

_DYADIC_RE = re.compile(r"^\s*(\d+)\s*/\s*2\^(\d+)\s*$")


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings, dyadics and fractions to a Fraction.

    Floats are refused on purpose.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Dyadic):
        return value.to_fraction()
    if isinstance(value, str):
        m = _DYADIC_RE.match(value)
        if m:
            return Fraction(int(m.group(1)), 1 << int(m.group(2)))
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: RationalLike) -> str:
    q = to_rational(q)
    return f"{q.numerator}/{q.denominator}"


def nim_add_int(a: int, b: int) -> int:
    """Nim-sum of two nonnegative integers."""
    if a < 0 or b < 0:
        raise ValueError("nim-addition is defined on nonnegative integers")
    return a ^ b


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Dyadic:
    """The number ``mantissa / 2**level``.

    Instances keep the level they were built with (the pinned view used by
    grid code); ``canonical()`` strips trailing zero bits.  Equality, hashing
    and ordering go by value, so ``Dyadic(2, 2) == Dyadic(1, 1)``.
    """

    mantissa: int
    level: int = 0

    def __post_init__(self) -> None:
        if self.mantissa < 0:
            raise ValueError("dyadic mantissa must be nonnegative")
        if self.level < 0:
            raise ValueError("dyadic level must be nonnegative")

    @classmethod
    def from_fraction(cls, q: RationalLike) -> "Dyadic":
        q = to_rational(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Accepts "m/2^n" as well as any exact rational string."""
        m = _DYADIC_RE.match(text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        return cls.from_fraction(text)

    def canonical(self) -> "Dyadic":
        m, n = self.mantissa, self.level
        if m == 0:
            return Dyadic(0, 0)
        shift = min(n, (m & -m).bit_length() - 1)
        return Dyadic(m >> shift, n - shift)

    def at_level(self, n: int) -> int:
        """Mantissa of this number at level ``n``; ValueError if it does not fit."""
        c = self.canonical()
        if c.level > n:
            raise ValueError(f"{self} is not representable at level {n}")
        return c.mantissa << (n - c.level)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.level)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        n = max(self.level, other.level)
        return Dyadic(self.at_level(n) + other.at_level(n), n)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        n = max(self.level, other.level)
        return Dyadic(self.at_level(n) - other.at_level(n), n)

    def scaled(self, k: int) -> "Dyadic":
        """This number times ``2**k`` (``k`` may be negative)."""
        if k >= 0:
            if self.level >= k:
                return Dyadic(self.mantissa, self.level - k)
            return Dyadic(self.mantissa << (k - self.level), 0)
        return Dyadic(self.mantissa, self.level - k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.to_fraction() == other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Dyadic):
            return self.to_fraction() < other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.mantissa}/2^{self.level}"

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.level})"


ONE = Dyadic(1, 0)
ZERO = Dyadic(0, 0)


def as_dyadic(value: RationalLike) -> Dyadic:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, str):
        return Dyadic.parse(value)
    return Dyadic.from_fraction(value)


def _check_unit(x: Dyadic) -> None:
    if x.mantissa > (1 << x.level):
        raise ValueError(f"{x} lies outside [0, 1]")


def nim_add_unit(x: RationalLike, y: RationalLike) -> Dyadic:
    """Nim-addition on [0, 1].

    Dyadic numbers below 1 use their finite binary expansion and 1 is read
    as 0.111..., so ``x (+) 1 = 1 - x``.
    """
    x, y = as_dyadic(x), as_dyadic(y)
    _check_unit(x)
    _check_unit(y)
    if x == ONE:
        return (ONE - y).canonical()
    if y == ONE:
        return (ONE - x).canonical()
    n = max(x.canonical().level, y.canonical().level)
    return Dyadic(x.at_level(n) ^ y.at_level(n), n).canonical()


def to_common_level(points: Iterable[RationalLike], n: int) -> list[int]:
    """Mantissas of ``points`` at level ``n``."""
    return [as_dyadic(p).at_level(n) for p in points]


def common_level(points: Iterable[RationalLike]) -> int:
    """Smallest level at which every point is representable."""
    return max((as_dyadic(p).canonical().level for p in points), default=0)

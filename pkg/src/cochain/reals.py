"""Precision-indexed rational approximations of real numbers.

A :class:`ComputableReal` wraps a total function k -> rational r_k with
|x - r_k| < 2^-k.  Exact square-root bounds on rationals (via integer
square roots) back the Euclidean distance approximators.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable


def sqrt_lower(x, k: int) -> Fraction:
    """Largest s/2^k with s/2^k <= sqrt(x); error < 2^-k."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of negative rational")
    n = 1 << k
    s = isqrt(n * n * x.numerator // x.denominator)
    return Fraction(s, n)


def sqrt_upper(x, k: int) -> Fraction:
    """A bound >= sqrt(x) within 2^-k of it."""
    return sqrt_lower(x, k) + Fraction(1, 1 << k)


def sqrt_approx(x, k: int) -> Fraction:
    """Rational within 2^-k of sqrt(x)."""
    return sqrt_lower(x, k + 1) + Fraction(1, 1 << (k + 1))


class ComputableReal:
    """A real given by a rational approximator with the 2^-k contract."""

    def __init__(self, approx: Callable[[int], Fraction], name: str = ""):
        self._approx = approx
        self._cache: dict[int, Fraction] = {}
        self.name = name

    def approx(self, k: int) -> Fraction:
        """Rational within 2^-k of the represented real."""
        if k not in self._cache:
            self._cache[k] = Fraction(self._approx(k))
        return self._cache[k]

    def upper(self, k: int) -> Fraction:
        """Rational upper bound, within 2^-(k-1) of the real."""
        return self.approx(k) + Fraction(1, 1 << k)

    def lower(self, k: int) -> Fraction:
        return self.approx(k) - Fraction(1, 1 << k)

    def __float__(self) -> float:
        return float(self.approx(40))

    def __repr__(self) -> str:
        v = float(self)
        return f"ComputableReal({self.name or v!r}~{v:.9g})"

    # -- constructors -------------------------------------------------

    @staticmethod
    def exactly(value) -> "ComputableReal":
        v = Fraction(value)
        return ComputableReal(lambda k: v, name=str(v))

    @staticmethod
    def sqrt_of(value) -> "ComputableReal":
        v = Fraction(value)
        return ComputableReal(lambda k: sqrt_approx(v, k))

    @staticmethod
    def max_of(reals: list["ComputableReal"]) -> "ComputableReal":
        if not reals:
            raise ValueError("max of empty list")
        return ComputableReal(lambda k: max(r.approx(k) for r in reals))

    def plus(self, other: "ComputableReal") -> "ComputableReal":
        return ComputableReal(
            lambda k: self.approx(k + 1) + other.approx(k + 1))

    def plus_rational(self, c) -> "ComputableReal":
        c = Fraction(c)
        return ComputableReal(lambda k: self.approx(k) + c)

"""Exact q-analogue arithmetic: Gaussian binomials and half-integral powers."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Exponent = Union[int, Fraction, "HalfInt"]


class HalfInt:
    """Non-negative multiple of 1/2, stored as ``twice``."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if twice < 0:
            raise ValueError("HalfInt must be non-negative")
        self.twice = int(twice)

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        f = Fraction(value)
        if (2 * f).denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/2")
        return cls(int(2 * f))

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integral(self) -> bool:
        return self.twice % 2 == 0

    def __eq__(self, other) -> bool:
        try:
            return self.as_fraction() == Fraction(other.as_fraction() if isinstance(other, HalfInt) else other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __repr__(self) -> str:
        return f"HalfInt({self})"

    def __str__(self) -> str:
        f = self.as_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _as_fraction(x: Exponent) -> Fraction:
    if isinstance(x, HalfInt):
        return x.as_fraction()
    return Fraction(x)


def q_pow(q: int, exp: Exponent) -> int:
    """Exact ``q**exp`` for an exponent that is a non-negative multiple of 1/2.

    Half-integral exponents are evaluated as ``sqrt(q)**(2*exp)`` and need q
    to be a perfect square.
    """
    f = _as_fraction(exp)
    if f < 0:
        raise ValueError(f"negative exponent {f}")
    if f.denominator == 1:
        return q ** f.numerator
    if f.denominator != 2:
        raise ValueError(f"exponent {f} is not a multiple of 1/2")
    r = isqrt(q)
    if r * r != q:
        raise ValueError(f"q^{f} requires square field size, got q={q}")
    return r ** f.numerator


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of (b-1)-spaces of PG(a-1, q); zero when b > a."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if a < 0 or b < 0:
        raise ValueError("gaussian_binomial needs non-negative arguments")
    if b > a:
        return 0
    result = 1
    for i in range(1, b + 1):
        # after step i the value is qbin(a-b+i, i), hence an integer
        num = result * (q ** (a - b + i) - 1)
        result, rem = divmod(num, q ** i - 1)
        assert rem == 0, "non-exact division in gaussian_binomial"
    return result


def binom2(n: int) -> int:
    """n choose 2, extended to all integers as n(n-1)/2."""
    return n * (n - 1) // 2


def q_adic_valuation(n: int, q: int) -> Fraction:
    """Exponent k (possibly fractional) with q^k exactly dividing n.

    For q = p^h this is v_p(n)/h.  Raises on n == 0.
    """
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    p = next(k for k in range(2, q + 1) if q % k == 0)
    h, r = 0, q
    while r > 1:
        r //= p
        h += 1
    v, n = 0, abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return Fraction(v, h)

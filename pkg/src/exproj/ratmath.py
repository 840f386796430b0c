"""Exact arithmetic helpers.

Rationals are plain :class:`fractions.Fraction` values.  Everything here is
integer-exact; nothing passes through floating point.
"""
from fractions import Fraction
import math
import re

Rational = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def isqrt(x):
    """Return floor(sqrt(x)) for a nonnegative integer."""
    if x < 0:
        raise ValueError(f"isqrt of negative number {x}")
    return math.isqrt(x)


def floor_half_diff(K, D):
    """Return floor((K - sqrt(D)) / 2) exactly.

    If D is a perfect square r*r this is (K - r) // 2.  Otherwise
    r < sqrt(D) < r + 1, so K - sqrt(D) lies strictly inside
    (K - r - 1, K - r) and its floor is K - r - 1; halving commutes with
    flooring, giving (K - r - 1) // 2.
    """
    if D < 0:
        raise ValueError(f"floor_half_diff needs D >= 0, got {D}")
    r = math.isqrt(D)
    if r * r == D:
        return (K - r) // 2
    return (K - r - 1) // 2


def iroot(x, q):
    """Largest integer y >= 0 with y**q <= x."""
    if x < 0 or q < 1:
        raise ValueError("iroot needs x >= 0 and q >= 1")
    if x < 2 or q == 1:
        return x
    y = int(round(x ** (1.0 / q))) if x.bit_length() < 1000 else 1 << (x.bit_length() // q)
    while y ** q > x:
        y -= 1
    while (y + 1) ** q <= x:
        y += 1
    return y


def floor_pow(N, e):
    """floor(N**e) for integer N >= 1 and rational exponent e >= 0, exactly."""
    e = Fraction(e)
    if N < 1 or e < 0:
        raise ValueError("floor_pow needs N >= 1 and e >= 0")
    return iroot(N ** e.numerator, e.denominator)


def to_rational(x):
    """Coerce int, Fraction or a "p/q" string to Fraction.

    Floats and decimal strings are rejected so that bound computations stay exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise ValueError(f"not a rational of the form p or p/q: {x!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"

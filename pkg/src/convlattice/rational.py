"""Exact rational scalars and their string form ``"p/q"``."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Tuple

Point = Tuple[Fraction, ...]
Vector = Tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction without ever passing through a float.

    Accepts ints, Fractions, other exact rationals and strings such as
    ``"3"``, ``"-7/4"``. Floats are refused.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} refused; use 'p/q' strings")
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_fraction(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational literal {text!r}") from None
    if d <= 0:
        raise ValueError(f"denominator must be positive in {text!r}")
    return Fraction(n, d)


def format_fraction(x: Fraction) -> str:
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_point(coords: Iterable) -> Point:
    return tuple(to_fraction(c) for c in coords)


def format_point(p: Sequence[Fraction]) -> list[str]:
    return [format_fraction(c) for c in p]

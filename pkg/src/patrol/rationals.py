"""Exact rational parsing, formatting and period arithmetic.

All times and 1D coordinates in this package are `fractions.Fraction`
values so that visit times, periods and latencies come out exact on
instances given with decimal data.  Euclidean distances are converted
through their IEEE double value, which is itself an exact binary
fraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Union

Real = Union[int, float, str, Fraction]


def to_fraction(value: Real) -> Fraction:
    """Convert a JSON-ish number to an exact Fraction.

    Accepted forms: int, Fraction, decimal strings ("2.5"), rational
    strings ("5/2") and floats (converted via their shortest decimal
    repr, so a JSON literal 2.5 parses to exactly 5/2).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(text)
    raise ValueError(f"not a number: {value!r}")


def format_fraction(value: Real) -> str:
    """Render a Fraction exactly: a decimal string when the denominator
    is of the form 2^a*5^b, otherwise "p/q"."""
    f = to_fraction(value)
    den = f.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{f.numerator}/{f.denominator}"
    shift = max(twos, fives)
    scaled = f.numerator * 10**shift // f.denominator
    if shift == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    whole, frac = digits[:-shift], digits[-shift:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def lcm_fractions(values: Iterable[Fraction]) -> Fraction:
    """Least common multiple of positive rationals.

    lcm(p1/q1, p2/q2) = lcm(p1, p2) / gcd(q1, q2); this is the smallest
    positive rational that is an integer multiple of every input.
    """
    num = 1
    den = 0
    for v in values:
        f = Fraction(v)
        if f <= 0:
            raise ValueError("lcm requires positive values")
        num = num * f.numerator // gcd(num, f.numerator)
        den = gcd(den, f.denominator)
    if den == 0:
        raise ValueError("lcm of empty sequence")
    return Fraction(num, den)

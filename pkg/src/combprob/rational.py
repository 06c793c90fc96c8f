"""Exact rational values.  Floats are refused everywhere."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_RATIONAL_RE = re.compile(r"^\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"-p/q"`` or an integer; the result is in lowest terms.

    >>> parse_rational("-2/10")
    Fraction(-1, 5)
    >>> parse_rational("−1/4")
    Fraction(-1, 4)
    """
    m = _RATIONAL_RE.match(text.replace("−", "-"))
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    sign, num, den = m.groups()
    den = int(den) if den is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(int(num), den)
    return -value if sign == "-" else value


def as_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__} {value!r}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))

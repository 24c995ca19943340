"""Exact rational scalars.

``Rat`` is :class:`fractions.Fraction`: arbitrary precision, always in lowest
terms with a positive denominator.  Floats are refused on purpose; every
quantity in this package must be exact.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import FormatError

Rat = Fraction
RatLike = Union[int, Fraction, str]

_RAT_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?")


def as_rat(value: RatLike) -> Fraction:
    """Coerce ``value`` to a Fraction without ever rounding."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    # gmpy2.mpq and friends expose numerator/denominator
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None and not isinstance(value, float):
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rat(text: str) -> Fraction:
    """Parse the literal grammar ``-?[0-9]+(/[1-9][0-9]*)?``."""
    s = text.strip()
    if not _RAT_RE.fullmatch(s):
        raise FormatError(f"not a rational literal: {text!r}")
    return Fraction(s)


def format_rat(q: Fraction) -> str:
    """Canonical ``num/den`` form; the denominator is always written."""
    return f"{q.numerator}/{q.denominator}"


def rat_str(q: Fraction) -> str:
    """Short human form: ``3/7``, or ``4`` for integers."""
    return str(q)


def to_decimal(q: Fraction, digits: int = 12) -> str:
    """Approximate decimal projection with ``digits`` significant digits."""
    return f"{float(q):.{digits}g}"

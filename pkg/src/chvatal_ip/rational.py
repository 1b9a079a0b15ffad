"""Exact rationals: :class:`fractions.Fraction` plus a strict text form.

The text form is ``p`` or ``p/q`` with ``q > 1`` and ``gcd(|p|, q) = 1``;
zero is ``0``.  Parsing rejects anything else, including non-reduced input.
"""
import re
from fractions import Fraction
from math import gcd

Rational = Fraction

_RAT_RE = re.compile(r"^(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


class RationalFormatError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Coerce ints and Fractions; floats and strings are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(token: str) -> Fraction:
    m = _RAT_RE.match(token)
    if not m:
        raise RationalFormatError(f"not a rational literal: {token!r}")
    sign, num, den = m.groups()
    p = int(num)
    if sign and p == 0:
        raise RationalFormatError(f"negative zero is not canonical: {token!r}")
    if den is None:
        return Fraction(-p if sign else p)
    q = int(den)
    if q == 1:
        raise RationalFormatError(f"denominator 1 must be omitted: {token!r}")
    if p == 0 or gcd(p, q) != 1:
        raise RationalFormatError(f"rational literal is not reduced: {token!r}")
    return Fraction(-p if sign else p, q)


def lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        d = v.denominator
        out = out * d // gcd(out, d)
    return out

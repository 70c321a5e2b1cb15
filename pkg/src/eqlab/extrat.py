"""Exact extended rationals: Fraction values plus a single infinity.

Finite distances are `fractions.Fraction`; infinity is `math.inf`.  The two
mix safely under comparison, and the helpers below keep addition exact
(infinity absorbs, finite sums stay Fraction).  Nothing here ever produces
a finite float.
"""

import math
from fractions import Fraction

INF = math.inf


def is_inf(x):
    return x == INF


def ext_add(a, b):
    """a + b with infinity absorbing; finite results stay exact."""
    if a == INF or b == INF:
        return INF
    return a + b


def ext_sum(values):
    total = Fraction(0)
    for v in values:
        if v == INF:
            return INF
        total += v
    return total


def ext_max(values):
    """max over an iterable, empty max defined as 0 (sup metric on no points)."""
    best = Fraction(0)
    for v in values:
        if v == INF:
            return INF
        if v > best:
            best = v
    return best


def parse_ext(text):
    """Parse 'p/q', an integer literal, or 'inf'."""
    text = text.strip()
    if text in ("inf", "oo", "∞"):
        return INF
    return Fraction(text)


def ext_str(x):
    """Canonical text form: 'inf', or 'p/q' / 'n' for exact rationals."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_ext(value):
    """Coerce JSON-ish input (int, str, Fraction, inf) to an extended rational."""
    if value == INF:
        return INF
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a distance")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_ext(value)
    raise TypeError(f"not an exact extended rational: {value!r}")

"""Exact-rational helpers shared by the graph, lattice and reduction modules."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]

# relative tolerance for every float-mode comparison
FLOAT_TOL = 1e-9


def parse_rational(token: str) -> Fraction:
    """Parse ``num/den``, an integer or a finite decimal into an exact Fraction."""
    try:
        value = Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {token!r}") from exc
    return value


def parse_number(token: str) -> Number:
    """Like :func:`parse_rational` but decimals with a point or exponent become floats.

    Integers and ``num/den`` stay exact; anything written in decimal notation is
    taken to be a rounded real.
    """
    token = token.strip()
    if any(ch in token for ch in ".eE") or token.lower() in ("inf", "nan"):
        value = float(token)
        if not math.isfinite(value):
            raise ValueError(f"non-finite number: {token!r}")
        return value
    return parse_rational(token)


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    # repr round-trips a double with at most 17 significant digits
    text = repr(float(x))
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    guess = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton refinement; the float guess can be off for large n
    x = max(guess, 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    for cand in (x - 1, x, x + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def exact_pow(base: Fraction, exponent: Fraction) -> Fraction | None:
    """``base ** exponent`` when the result is rational, else None.

    ``base`` must be positive.
    """
    if base <= 0:
        raise ValueError("base must be positive")
    exponent = Fraction(exponent)
    num, den = exponent.numerator, exponent.denominator
    a = integer_root(base.numerator, den)
    b = integer_root(base.denominator, den)
    if a is None or b is None:
        return None
    return Fraction(a, b) ** num


def real_pow(base: Number, exponent: Number) -> Number:
    """Exact power if it is rational, otherwise a float."""
    if isinstance(base, Fraction) and isinstance(exponent, Fraction) and base > 0:
        exact = exact_pow(base, exponent)
        if exact is not None:
            return exact
    if base == 0:
        return Fraction(0) if isinstance(base, Fraction) else 0.0
    return float(base) ** float(exponent)


_EXACT_TYPES = (Fraction, int)


def is_exact(*values) -> bool:
    for v in values:
        if type(v) not in _EXACT_TYPES and not isinstance(v, _EXACT_TYPES):
            return False
    return True


def integer_exponent(p: Number) -> int | None:
    if isinstance(p, Fraction) and p.denominator == 1:
        return int(p)
    if isinstance(p, int):
        return p
    return None


def leq(a: Number, b: Number) -> bool:
    """``a <= b``; exact when both sides are rational, else with relative slack."""
    if is_exact(a, b):
        return a <= b
    b = float(b)
    return float(a) <= b + FLOAT_TOL * max(abs(b), 1.0)


def to_fraction(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)

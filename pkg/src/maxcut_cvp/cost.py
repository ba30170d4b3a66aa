"""Closed-form exponent and approximation-factor calculators.

Rational inputs give exact Fraction results wherever the formula stays rational.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._numeric import Number, real_pow


def _check_gamma(gamma: Number) -> None:
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")


def _check_p(p) -> int:
    if p not in (1, 2):
        raise ValueError("only the l1 and l2 exponents are defined")
    return int(p)


def ar15_rho(gamma: Number, p: int = 2) -> Number:
    """Query exponent of the data-dependent ANN scheme: 1/(2g^2-1) in l2, 1/(2g-1) in l1."""
    _check_gamma(gamma)
    if math.isinf(gamma):
        return 0.0
    if _check_p(p) == 2:
        return 1 / (2 * gamma**2 - 1)
    return 1 / (2 * gamma - 1)


def classical_exponent(gamma: Number, p: int = 2) -> Number:
    """Exponent of 2^n for the half/half meet-in-the-middle binary CVP solver."""
    _check_gamma(gamma)
    if math.isinf(gamma):
        return Fraction(1, 2)
    if _check_p(p) == 2:
        return Fraction(1, 2) + 1 / (4 * gamma**2 - 2)
    return Fraction(1, 2) + 1 / (4 * gamma - 2)


def quantum_exponent(gamma: Number) -> Number:
    """Exponent of the Grover-accelerated one-third split (l2)."""
    _check_gamma(gamma)
    if math.isinf(gamma):
        return Fraction(1, 3)
    return Fraction(1, 3) + 2 / (6 * gamma**2 - 3)


def mitm_exponent(a: Number, C: Number, rho: Number) -> Number:
    """max(C a, (1 + rho)(1 - a)): the dominant term of a split at fraction ``a``."""
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    return max(C * a, (1 + rho) * (1 - a))


def hard_regime_gamma_bound(n: Number, p: Number) -> float:
    """(sqrt(ln n)) ** (1/p): natural-log convention."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if p < 1:
        raise ValueError("p must be >= 1")
    if math.isinf(p):
        return 1.0
    return math.sqrt(math.log(n)) ** (1.0 / float(p))


def max_eps_exponent(c: Number) -> Number:
    """1/(2(1-c)): the largest log-power exponent for eps keeping gamma below the bound."""
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    return 1 / (2 * (1 - c))


def gamma_limit(epsilon: Number, c: Number, p: Number) -> Number:
    """eps ** ((c-1)/p)."""
    if isinstance(epsilon, Fraction) and isinstance(c, Fraction) and isinstance(p, Fraction):
        return real_pow(epsilon, (c - 1) / p)
    return float(epsilon) ** ((float(c) - 1) / float(p))


def all_exponents(gamma: Number, p: int) -> dict[str, Number]:
    out: dict[str, Number] = {
        "ar15_rho": ar15_rho(gamma, p),
        "classical": classical_exponent(gamma, p),
    }
    if p == 2:
        out["quantum"] = quantum_exponent(gamma)
    return out

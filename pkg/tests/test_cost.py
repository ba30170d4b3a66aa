import math
from fractions import Fraction

import mpmath
import pytest

from maxcut_cvp.cost import (
    all_exponents,
    ar15_rho,
    classical_exponent,
    gamma_limit,
    hard_regime_gamma_bound,
    max_eps_exponent,
    mitm_exponent,
    quantum_exponent,
)
from maxcut_cvp.graph import GapSpec
from maxcut_cvp.reduction import limit_gamma


def test_examples():
    assert ar15_rho(Fraction(2), 2) == Fraction(1, 7)
    assert ar15_rho(Fraction(2), 1) == Fraction(1, 3)
    assert ar15_rho(math.inf) == 0
    assert classical_exponent(Fraction(2), 2) == Fraction(4, 7)
    assert classical_exponent(Fraction(2), 1) == Fraction(2, 3)
    assert classical_exponent(math.inf) == Fraction(1, 2)
    assert quantum_exponent(Fraction(2)) == Fraction(3, 7)
    assert quantum_exponent(math.inf) == Fraction(1, 3)
    assert max_eps_exponent(Fraction(1, 2)) == 1
    assert hard_regime_gamma_bound(math.exp(4), 2) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert hard_regime_gamma_bound(100, math.inf) == 1


def test_domain_errors():
    for fn in (ar15_rho, classical_exponent, quantum_exponent):
        with pytest.raises(ValueError):
            fn(1)
    with pytest.raises(ValueError):
        quantum_exponent(math.sqrt(5 / 6))
    with pytest.raises(ValueError):
        ar15_rho(2, 3)
    with pytest.raises(ValueError):
        max_eps_exponent(1)
    with pytest.raises(ValueError):
        hard_regime_gamma_bound(1, 2)
    with pytest.raises(ValueError):
        mitm_exponent(1, 1, 0)


def test_identity_and_monotonicity():
    grid = [Fraction(k, 8) for k in range(9, 40)]
    for g in grid:
        assert classical_exponent(g, 2) == Fraction(1, 2) + ar15_rho(g, 2) / 2
        assert quantum_exponent(g) < classical_exponent(g, 2)
    for f in (lambda g: ar15_rho(g, 2), lambda g: ar15_rho(g, 1), lambda g: classical_exponent(g, 1),
              quantum_exponent):
        vals = [f(g) for g in grid]
        assert all(x > y for x, y in zip(vals, vals[1:]))


def test_mitm_exponent_balanced_split():
    rho = Fraction(1, 7)
    a = (1 + rho) / (2 + rho)
    assert mitm_exponent(a, 1, rho) == a == Fraction(8, 15)
    assert mitm_exponent(Fraction(1, 2), 1 + rho, rho) == classical_exponent(Fraction(2), 2)


def test_gamma_limit_against_mpmath():
    mpmath.mp.dps = 40
    val = gamma_limit(Fraction(1, 4), Fraction(1, 2), Fraction(2))
    assert float(val) == pytest.approx(float(mpmath.sqrt(2)), rel=1e-13)
    for eps, c, p in [(Fraction(1, 10), Fraction(1, 3), 3), (Fraction(1, 2), Fraction(9, 10), 1)]:
        ref = mpmath.mpf(eps.numerator) / eps.denominator
        ref = ref ** ((mpmath.mpf(c.numerator) / c.denominator - 1) / p)
        assert float(gamma_limit(eps, c, Fraction(p))) == pytest.approx(float(ref), rel=1e-13)
        assert float(limit_gamma(GapSpec(eps, c, p))) == pytest.approx(float(ref), rel=1e-13)


def test_all_exponents():
    out = all_exponents(Fraction(2), 2)
    assert out == {"ar15_rho": Fraction(1, 7), "classical": Fraction(4, 7), "quantum": Fraction(3, 7)}
    assert "quantum" not in all_exponents(Fraction(2), 1)

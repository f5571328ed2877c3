#!/usr/bin/env python3
"""
Polynomial Tests

Exact rational polynomial and rational-function arithmetic.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import Polynomial, RationalFunction, legendre_polynomial
from legendre_core.polynomial import ONE_MINUS_X2, polynomial_gcd


def test_arithmetic():
    x = Polynomial.x()
    product = (x + 1) * (x - 1)
    assert product == Polynomial((-1, 0, 1))
    assert product.degree == 2
    assert (product - product).is_zero()
    assert (x**3).coefficient(3) == 1
    assert ONE_MINUS_X2 == Polynomial.constant(1) - x * x


def test_division():
    x = Polynomial.x()
    quotient, remainder = divmod(x**3 - 1, x - 1)
    assert quotient == x * x + x + 1
    assert remainder.is_zero()
    assert polynomial_gcd((x - 1) * (x + 2), (x - 1) * (x - 3)) == x - 1


def test_calculus_and_evaluation():
    p = Polynomial((1, 2, 3))  # 1 + 2x + 3x^2
    assert p.derivative() == Polynomial((2, 6))
    assert p.derivative(3).is_zero()
    assert p(Fraction(1, 2)) == Fraction(11, 4)
    assert np.allclose(p.evaluate(np.array([0.0, 1.0])), [1.0, 6.0])
    assert p.shift(1, 1) == Polynomial((6, 8, 3))


def test_rational_roots():
    x = Polynomial.x()
    p = (x - 1) ** 2 * (x + 2) * (x.scale(2) - 1)
    assert p.rational_roots() == [(Fraction(-2), 1), (Fraction(1, 2), 1), (Fraction(1), 2)]
    assert (x * x + 1).rational_roots() == []
    assert (x**2).rational_roots() == [(Fraction(0), 2)]


def test_legendre_polynomials():
    assert legendre_polynomial(0) == Polynomial.constant(1)
    assert legendre_polynomial(2) == Polynomial((Fraction(-1, 2), 0, Fraction(3, 2)))
    assert legendre_polynomial(4).coeffs == (Fraction(3, 8), 0, Fraction(-15, 4), 0, Fraction(35, 8))
    for n in range(8):
        assert legendre_polynomial(n)(1) == 1
        assert legendre_polynomial(n)(-1) == (-1) ** n


def test_rational_functions():
    x = Polynomial.x()
    r = RationalFunction(x * x - 1, x - 1)
    assert r.is_polynomial()
    assert r.num == x + 1
    s = RationalFunction(Polynomial.constant(1), x + 1)
    assert (s * (x + 1)).is_polynomial()
    assert (s + s).num == Polynomial.constant(2)
    assert s.derivative() == RationalFunction(Polynomial.constant(-1), (x + 1) ** 2)
    assert abs(float(s.evaluate(1.0)) - 0.5) < 1e-15
    try:
        RationalFunction(x, Polynomial())
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("zero denominator accepted")


def main():
    """Run all tests"""
    tests = [
        test_arithmetic,
        test_division,
        test_calculus_and_evaluation,
        test_rational_roots,
        test_legendre_polynomials,
        test_rational_functions,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} polynomial tests passed")


if __name__ == "__main__":
    main()

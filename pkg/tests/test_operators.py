#!/usr/bin/env python3
"""
Operator Algebra Tests

Legendre-Stirling numbers, structured and expanded powers of l, exact
composition, symbolic application and indicial roots.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    DEFICIENCY_INDICES,
    OperatorError,
    Polynomial,
    apply_numeric,
    apply_symbolic,
    as_polynomial,
    compose,
    evaluate,
    expand,
    indicial_roots,
    legendre_derivatives,
    legendre_polynomial,
    legendre_power,
    legendre_stirling,
    legendre_stirling_triangle,
    parse,
)
from legendre_core.expr import poly_expr
from legendre_core.operators import (
    ExpandedOperator,
    StructuredOperator,
    apply_structured_symbolic,
    composition_mismatches,
    indicial_polynomial,
    operator_from_json,
    stirling_mismatches,
)


def test_stirling_numbers():
    assert legendre_stirling(1, 1) == 1
    assert [legendre_stirling(2, j) for j in (1, 2)] == [2, 1]
    assert [legendre_stirling(3, j) for j in (1, 2, 3)] == [4, 8, 1]
    assert legendre_stirling_triangle(3) == [[1], [2, 1], [4, 8, 1]]
    assert legendre_stirling_triangle(4)[3] == [8, 52, 20, 1]
    assert stirling_mismatches(10) == []
    for bad in ((0, 1), (2, 3), (2, 0)):
        try:
            legendre_stirling(*bad)
        except ValueError:
            continue
        raise AssertionError(f"{bad} accepted")


def test_structured_powers():
    assert legendre_power(1).terms == ((1, Fraction(-1)),)
    assert legendre_power(2).terms == ((1, Fraction(-2)), (2, Fraction(1)))
    assert legendre_power(3).order == 6
    try:
        StructuredOperator(((1, 1), (1, 2)))
    except OperatorError:
        pass
    else:
        raise AssertionError("repeated index accepted")


def test_expanded_legendre_expression():
    ell = expand(legendre_power(1))
    assert ell.order == 2
    assert ell.coefficient(0).is_zero()
    assert ell.coefficient(1) == Polynomial((0, 2))
    assert ell.coefficient(2) == Polynomial((-1, 0, 1))


def test_expanded_square():
    """(1-x^2)^2 y'''' - 8x(1-x^2) y''' + (14x^2 - 6) y'' + 4x y'"""
    square = expand(legendre_power(2))
    assert square.coefficient(4) == Polynomial((1, 0, -2, 0, 1))
    assert square.coefficient(3) == Polynomial((0, -8, 0, 8))
    assert square.coefficient(2) == Polynomial((-6, 0, 14))
    assert square.coefficient(1) == Polynomial((0, 4))
    assert square.coefficient(0).is_zero()


def test_composition_matches_stirling_expansion():
    start = time.time()
    assert composition_mismatches(5) == []
    assert time.time() - start < 5.0
    ell = expand(legendre_power(1))
    assert compose(ell, compose(ell, ell)) == expand(legendre_power(3))
    identity = ExpandedOperator.identity()
    assert compose(identity, ell) == ell and compose(ell, identity) == ell


def test_symbolic_application():
    ell, square = legendre_power(1), legendre_power(2)
    for n in range(7):
        pn = poly_expr(legendre_polynomial(n))
        image = as_polynomial(apply_symbolic(ell, pn))
        assert Polynomial(image) == legendre_polynomial(n).scale(n * (n + 1))
    assert as_polynomial(apply_symbolic(ell, parse("ln(1-x)"))) == (1,)
    assert as_polynomial(apply_symbolic(square, parse("ln(1-x)"))) == (0,)
    assert as_polynomial(apply_symbolic(ell, parse("ln(1+x)"))) == (1,)
    structured = apply_structured_symbolic(square, parse("x^3"))
    assert as_polynomial(structured) == as_polynomial(apply_symbolic(square, parse("x^3")))


def test_numeric_application():
    ell = expand(legendre_power(1))
    x = np.linspace(-0.9, 0.9, 7)
    derivs = legendre_derivatives(4, x, 2)
    assert np.allclose(apply_numeric(ell, derivs, x), 20.0 * derivs[0], atol=1e-12)
    g = parse("(1+x)^(3/2)")
    square = expand(legendre_power(2))
    from legendre_core.expr import derivative_ladder

    ladder = [evaluate(d, 0.3) for d in derivative_ladder(g, 4)]
    symbolic = evaluate(apply_symbolic(square, g), 0.3)
    assert abs(apply_numeric(square, ladder, 0.3) - symbolic) < 1e-10
    try:
        apply_numeric(square, ladder[:3], 0.3)
    except ValueError:
        pass
    else:
        raise AssertionError("short derivative list accepted")


def test_indicial_roots():
    for endpoint in (1, -1):
        assert indicial_roots(legendre_power(1), endpoint) == [0, 0]
        assert indicial_roots(legendre_power(2), endpoint) == [0, 0, 1, 1]
    # r^2 (r-1)^2 up to a constant
    poly = indicial_polynomial(legendre_power(2), 1)
    assert poly.monic() == Polynomial((0, 0, 1, -2, 1))


def test_deficiency_metadata():
    assert DEFICIENCY_INDICES[1] == (2, 2)
    assert DEFICIENCY_INDICES[2] == (4, 4)


def test_json_forms():
    op = legendre_power(2)
    assert op.to_json() == {"structured": [[1, "-2"], [2, "1"]]}
    assert operator_from_json(op.to_json()).terms == op.terms
    expanded = expand(op)
    assert operator_from_json(expanded.to_json()) == expanded
    try:
        operator_from_json({"other": []})
    except OperatorError:
        pass
    else:
        raise AssertionError("malformed description accepted")


def main():
    """Run all tests"""
    tests = [
        test_stirling_numbers,
        test_structured_powers,
        test_expanded_legendre_expression,
        test_expanded_square,
        test_composition_matches_stirling_expansion,
        test_symbolic_application,
        test_numeric_application,
        test_indicial_roots,
        test_deficiency_metadata,
        test_json_forms,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} operator tests passed")


if __name__ == "__main__":
    main()

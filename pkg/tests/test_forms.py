#!/usr/bin/env python3
"""
Boundary Form Tests

Pointwise forms, endpoint limits, GKN boundary-condition functions and
Green's formula.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    BCFunction,
    ConfigError,
    Polynomial,
    boundary_limit,
    form1,
    form2,
    form_limit,
    gkn_bracket_difference,
    gkn_independence_matrix,
    green_check,
    legendre_polynomial,
    legendre_power,
    parse,
)
from legendre_core.expr import poly_expr
from legendre_core.forms import (
    aitken,
    as_function,
    bracket_with_one,
    bracket_with_x,
    functional_B1,
    richardson_table,
)


SINGULAR_POOL = (
    "ln(1-x)",
    "ln(1+x)",
    "(1+x)^(3/2)",
    "(1-x)^(1/2)*x + (1+x)^(3/2)",
    "(1-x)*ln(1-x)",
    "x^2*ln(1+x)",
    "(1-x)^(-1/4)",
    "(1+x)^(5/2) - x",
)


def random_function(rng):
    """A random polynomial or a member of SINGULAR_POOL, as an expression"""
    if rng.random() < 0.5:
        degree = int(rng.integers(0, 5))
        return poly_expr(Polynomial(tuple(int(c) for c in rng.integers(-3, 4, size=degree + 1))))
    return parse(SINGULAR_POOL[int(rng.integers(len(SINGULAR_POOL)))])


def test_pointwise_forms():
    assert abs(form1("1", "x", 0.5) - 0.75) < 1e-15
    assert abs(form1("x", "x", 0.3)) < 1e-15
    x = np.linspace(-0.8, 0.8, 9)
    for text in ("x^3 - x", "ln(1-x)", "(1+x)^(3/2)"):
        assert np.allclose(bracket_with_one(text, x), form2(text, "1", x), atol=1e-12)
        assert np.allclose(bracket_with_x(text, x), form2(text, "x", x), atol=1e-12)
    assert abs(functional_B1("ln(1-x)", 0.5) + 1.5) < 1e-14


def _derivative_scale(f, x):
    return max(float(np.max(np.abs(d))) for d in as_function(f).derivatives(x, 3))


def test_forms_are_antisymmetric():
    rng = np.random.default_rng(11)
    x = np.array([-0.9, -0.35, 0.1, 0.7])
    for _ in range(20):
        f, g = random_function(rng), random_function(rng)
        tol = 1e-12 * max(1.0, _derivative_scale(f, x) * _derivative_scale(g, x))
        for form in (form1, form2):
            forward, backward = form(f, g, x), form(g, f, x)
            assert np.max(np.abs(forward + backward)) <= tol, (form.__name__, f, g)
            assert np.max(np.abs(form(f, f, x))) <= tol, (form.__name__, f)


def test_bracket_with_one_is_derivative_of_image():
    # [f,1]_2 = -(1-x^2) l'[f]; for f = x^3, l[f] = 12x^3 - 6x
    x = np.linspace(-0.9, 0.9, 7)
    expected = -(1.0 - x * x) * (36.0 * x * x - 6.0)
    assert np.allclose(bracket_with_one("x^3", x), expected, atol=1e-12)


def test_polynomial_brackets_vanish():
    for n in range(11):
        pn = poly_expr(legendre_polynomial(n))
        for endpoint in (1, -1):
            for kind in ("bracket_one", "bracket_x"):
                limit = form_limit(kind, pn, None, endpoint)
                assert limit.converged and abs(limit.estimate) < 1e-8, (n, kind, limit)


def test_boundary_limit_extrapolates():
    limit = boundary_limit(lambda x: 3.0 + (1.0 - x) - 2.0 * (1.0 - x) ** 2, 1)
    assert limit.converged
    assert abs(limit.estimate - 3.0) < 1e-9
    mirrored = boundary_limit(lambda x: np.exp(x), -1)
    assert abs(mirrored.estimate - np.exp(-1.0)) < 1e-9
    table = richardson_table([1.0 + 0.5**k for k in range(6)], levels=1)
    assert all(abs(v - 1.0) < 1e-14 for v in table[0])
    assert abs(aitken([1.0 + 0.5**k for k in range(5)])[-1] - 1.0) < 1e-14


def test_b1_of_logarithm():
    limit = form_limit("b1", "ln(1-x)", None, 1)
    assert limit.converged
    assert abs(limit.estimate + 2.0) < 1e-8
    assert abs(form_limit("b1", "ln(1-x)", None, -1).estimate) < 1e-8


def test_gkn_log_bracket():
    for delta in (0.1, 0.25, 0.4):
        difference = gkn_bracket_difference(BCFunction("f3", delta), BCFunction("g1", delta))
        assert difference.converged
        assert abs(difference.value + 4.0) < 1e-6, (delta, difference.value)


def test_bc_function_profiles():
    f1 = BCFunction("f1", 0.25)
    assert f1(0.9) == 1.0 and f1(-0.9) == 0.0
    values = f1.derivatives(np.array([-0.75, 0.0, 0.75]), 4)
    assert abs(values[0][0]) < 1e-12 and abs(values[0][2] - 1.0) < 1e-12
    # the blend joins the profiles with four matching derivatives
    for k in range(1, 5):
        assert abs(values[k][0]) < 1e-8 and abs(values[k][2]) < 1e-8
    g3 = BCFunction("g3", 0.25)
    assert abs(g3(0.9) - 0.1 * np.log(0.1)) < 1e-14


def test_bc_function_rejects_bad_input():
    for tag, delta in (("f5", 0.25), ("f1", 0.0), ("f1", 0.5), ("g2", -0.1)):
        try:
            BCFunction(tag, delta)
        except ConfigError:
            continue
        raise AssertionError(f"BCFunction({tag!r}, {delta}) accepted")


def test_gkn_independence():
    matrix = gkn_independence_matrix(0.25)
    assert matrix.shape == (4, 4)
    assert abs(np.linalg.det(matrix)) > 1.0


def test_green_formula():
    rng = np.random.default_rng(7)
    for order, op in ((2, legendre_power(1)), (4, legendre_power(2))):
        for _ in range(20):
            f, g = random_function(rng), random_function(rng)
            alpha, beta = np.sort(rng.uniform(-0.9, 0.9, size=2))
            if beta - alpha < 0.05:
                alpha, beta = -0.9, 0.9
            report = green_check(op, f, g, float(alpha), float(beta))
            assert report.converged
            assert report.residual <= 1e-8, (order, f, g, report)
        report = green_check(op, "ln(1-x)", "(1+x)^(3/2)", -0.9, 0.9)
        assert report.residual <= 1e-8, (order, report)


def test_green_rejects_bad_interval():
    try:
        green_check(legendre_power(1), "x", "x^2", 0.5, -0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("reversed interval accepted")


def main():
    """Run all tests"""
    tests = [
        test_pointwise_forms,
        test_forms_are_antisymmetric,
        test_bracket_with_one_is_derivative_of_image,
        test_polynomial_brackets_vanish,
        test_boundary_limit_extrapolates,
        test_b1_of_logarithm,
        test_gkn_log_bracket,
        test_bc_function_profiles,
        test_bc_function_rejects_bad_input,
        test_gkn_independence,
        test_green_formula,
        test_green_rejects_bad_interval,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} boundary form tests passed")


if __name__ == "__main__":
    main()

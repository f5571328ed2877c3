#!/usr/bin/env python3
"""
Chisholm-Everitt Tests

K(x) and its supremum against closed forms, the integral operators A and B,
norm-ratio checks against 2K, configuration errors and the sharpness probe.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    CEConfigurationError,
    CEProblem,
    K_of_x,
    K_sup,
    apply_A,
    apply_B,
    preset,
    sharpness_probe,
    verify_bound,
)
from legendre_core.ce import KFunction, default_corpus


def _p1_k_squared(x):
    """Closed form of K(x)^2 for phi = 1/(1-x^2), psi = 1 on (0, 1)"""
    t = 1.0 - x
    return x / (2.0 * (1.0 + x)) + 0.25 * t * np.log((1.0 + x) / t)


def test_unit_problem():
    problem = preset("ce-unit")
    assert abs(K_of_x(problem, 0.5) - 0.5) < 1e-10
    result = K_sup(problem)
    assert not result.unbounded
    assert abs(result.value - 0.5) < 1e-10
    assert abs(result.argmax - 0.5) < 1e-4
    image = apply_A(problem, "1")
    assert abs(image(0.25) - 0.75) < 1e-10
    assert np.allclose(image(np.array([0.1, 0.9])), [0.9, 0.1], atol=1e-10)
    assert abs(apply_B(problem, "1")(0.25) - 0.25) < 1e-10


def test_first_problem_matches_closed_form():
    problem = preset("ce-p1")
    k = KFunction(problem)
    for x in (0.3, 0.9, 1.0 - 1e-7):
        expected = _p1_k_squared(x)
        assert abs(k(x) ** 2 - expected) < 1e-8 * expected, x
    grid = np.linspace(0.001, 0.999, 20001)
    closed_max = float(np.sqrt(np.max(_p1_k_squared(grid))))
    result = K_sup(problem, k)
    assert not result.unbounded and not result.at_endpoint
    assert abs(result.value - closed_max) < 1e-6
    # interior maximum above the endpoint limit 1/2
    assert result.value > 0.5


def test_second_problem_limit():
    problem = preset("ce-p2")
    k = KFunction(problem)
    assert abs(k(1.0 - 1e-5) ** 2 - 1.0 / 36.0) < 1e-3
    result = K_sup(problem, k)
    assert np.isfinite(result.value) and not result.unbounded


def test_mirrors_share_the_supremum():
    for name in ("ce-p1", "ce-p2"):
        original = K_sup(preset(name)).value
        mirrored = K_sup(preset(f"{name}-mirror")).value
        assert abs(original - mirrored) < 1e-8 * original, name


def test_image_of_fourth_order_operator():
    # A applied to l^2[P3] gives l'[P3] = 90x^2 - 18
    from legendre_core import apply_symbolic, legendre_polynomial, legendre_power
    from legendre_core.expr import poly_expr

    problem = preset("ce-p1")
    source = apply_symbolic(legendre_power(2), poly_expr(legendre_polynomial(3)))
    image = apply_A(problem, source)
    for x in (0.3, 0.9):
        expected = 90.0 * x * x - 18.0
        assert abs(image(x) - expected) < 1e-8 * max(1.0, abs(expected)), x


def test_unbounded_k():
    problem = CEProblem.from_texts("unbounded", 0, 1, "1/(1-x)", "(1-x)^(-1/4)")
    result = K_sup(problem)
    assert result.unbounded and result.value == float("inf")
    try:
        verify_bound(problem, ["1"])
    except CEConfigurationError:
        pass
    else:
        raise AssertionError("bound verified for unbounded K")


def test_configuration_errors():
    problem = CEProblem.from_texts("bad-phi", 0, 1, "x^(-1/2)", "1")
    try:
        K_of_x(problem, 0.5)
    except CEConfigurationError:
        pass
    else:
        raise AssertionError("phi outside L^2 accepted")
    for args in ((1, 0, "1", "1"), (0, 1, "1", "1", "1", 2.0)):
        try:
            CEProblem.from_texts("bad", *args)
        except CEConfigurationError:
            continue
        raise AssertionError(f"{args} accepted")
    try:
        preset("ce-p9")
    except CEConfigurationError:
        pass
    else:
        raise AssertionError("unknown preset accepted")
    try:
        K_of_x(preset("ce-unit"), 1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("point outside the interval accepted")


def test_zero_function_has_zero_ratios():
    report = verify_bound(preset("ce-unit"), ["0"])
    assert report.records[0].ratio_A == 0.0
    assert report.records[0].ratio_B == 0.0


def test_bound_holds_on_default_corpus():
    for name in ("ce-unit", "ce-p1", "ce-p2"):
        problem = preset(name)
        corpus = default_corpus(problem, size=8, seed=1)
        report = verify_bound(problem, corpus, jobs=2)
        assert not report.violations, report.violations
        assert len(report.records) == len(corpus)
        assert 0.0 < report.max_ratio <= report.bound * (1.0 + 1e-6)


def test_sharpness_probe():
    report = sharpness_probe(preset("ce-unit"))
    assert abs(report.bound - 1.0) < 1e-9
    assert 0.25 < report.fraction_of_bound <= 1.0 + 1e-6
    assert report.best


def main():
    """Run all tests"""
    tests = [
        test_unit_problem,
        test_first_problem_matches_closed_form,
        test_second_problem_limit,
        test_mirrors_share_the_supremum,
        test_image_of_fourth_order_operator,
        test_unbounded_k,
        test_configuration_errors,
        test_zero_function_has_zero_ratios,
        test_bound_holds_on_default_corpus,
        test_sharpness_probe,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} Chisholm-Everitt tests passed")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Quadrature Tests

Legendre evaluation, Gauss-Legendre rules, adaptive and graded integration.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    gauss_legendre_rule,
    integrate,
    integrate_endpoint_graded,
    integrate_two_sided,
    legendre_derivatives,
    legendre_eval,
)
from legendre_core.quadrature import integrate_graded


def test_legendre_eval():
    assert legendre_eval(0, 0.3) == 1.0
    assert abs(legendre_eval(3, 0.5) - (-0.4375)) < 1e-15
    x = np.linspace(-1.0, 1.0, 101)
    for n in range(12):
        assert np.all(np.abs(legendre_eval(n, x)) <= 1.0 + 1e-14)


def test_legendre_derivatives():
    values = legendre_derivatives(3, 0.5, 4)
    assert abs(values[0] + 0.4375) < 1e-15
    assert abs(values[1] - 0.375) < 1e-14
    assert abs(values[2] - 7.5) < 1e-13
    assert abs(values[3] - 15.0) < 1e-13
    assert values[4] == 0.0
    assert legendre_derivatives(2, 0.1, 3)[3] == 0.0


def test_gauss_rule():
    rule = gauss_legendre_rule(5)
    assert abs(np.sum(rule.weights) - 2.0) < 1e-14
    assert np.all(rule.weights > 0)
    assert np.allclose(rule.nodes, -rule.nodes[::-1])
    # exact through degree 2m - 1 = 9
    assert abs(rule.apply(lambda x: x**8) - 2.0 / 9.0) < 1e-14
    assert abs(rule.apply(lambda x: x**9)) < 1e-15
    one = gauss_legendre_rule(1)
    assert one.nodes[0] == 0.0 and abs(one.weights[0] - 2.0) < 1e-15


def test_adaptive_integration():
    estimate = integrate(np.sin, 0.0, np.pi)
    assert estimate.converged
    assert abs(estimate.value - 2.0) < 1e-10
    steep = integrate(lambda x: 1.0 / (1e-3 + x * x), -1.0, 1.0, tol=1e-9)
    exact = 2.0 * np.arctan(1.0 / np.sqrt(1e-3)) / np.sqrt(1e-3)
    assert abs(steep.value - exact) < 1e-7


def test_graded_integration():
    estimate = integrate_endpoint_graded(lambda x: (1.0 - x) ** -0.5, 1)
    assert estimate.converged and not estimate.divergent
    assert abs(estimate.value - 2.0) < 1e-6

    mirrored = integrate_endpoint_graded(lambda x: (1.0 + x) ** -0.5, -1)
    assert abs(mirrored.value - 2.0) < 1e-6

    both = integrate_two_sided(lambda x: 1.0 / np.sqrt((1.0 - x) * (1.0 + x)))
    assert abs(both.value - np.pi) < 1e-6


def test_divergence_is_a_result_state():
    estimate = integrate_endpoint_graded(lambda x: 1.0 / (1.0 - x), 1)
    assert estimate.divergent
    assert not estimate.converged


def test_graded_integral_is_signed():
    forward = integrate_graded(lambda x: np.ones_like(x), 0.0, 1.0)
    backward = integrate_graded(lambda x: np.ones_like(x), 0.5, 0.0)
    assert abs(forward.value - 1.0) < 1e-8
    assert abs(backward.value + 0.5) < 1e-8


def main():
    """Run all tests"""
    tests = [
        test_legendre_eval,
        test_legendre_derivatives,
        test_gauss_rule,
        test_adaptive_integration,
        test_graded_integration,
        test_divergence_is_a_result_state,
        test_graded_integral_is_signed,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} quadrature tests passed")


if __name__ == "__main__":
    main()

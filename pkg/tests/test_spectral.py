#!/usr/bin/env python3
"""
Spectral Tests

Weak-form matrices, the Jacobi and Cholesky eigen solvers and the Galerkin
spectra of A and A^2.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    ConditioningError,
    ConfigError,
    EigenSolverError,
    Polynomial,
    WeakForm,
    expand,
    gram_matrix,
    legendre_power,
    spectrum,
    stiffness_matrix,
)
from legendre_core.spectral import bilinear, generalized_symmetric_eigen, jacobi_eigen, target_eigenvalues


def _exact_integral(p: Polynomial) -> Fraction:
    """int_{-1}^{1} p"""
    return sum((c * Fraction(2, k + 1) for k, c in enumerate(p.coeffs) if k % 2 == 0), Fraction(0))


def _apply(op, u: Polynomial) -> Polynomial:
    total = Polynomial()
    for k, a in enumerate(expand(op).coeffs):
        total = total + a * u.derivative(k)
    return total


def test_legendre_matrices_are_diagonal():
    n = 8
    k = np.arange(n, dtype=float)
    gram = gram_matrix("legendre", n)
    assert np.allclose(gram, np.diag(2.0 / (2.0 * k + 1.0)), atol=1e-14)
    a1 = stiffness_matrix(WeakForm.FIRST_ORDER, "legendre", n)
    assert np.allclose(a1, np.diag(k * (k + 1.0) * 2.0 / (2.0 * k + 1.0)), atol=1e-11)
    a2 = stiffness_matrix(WeakForm.SECOND_ORDER, "legendre", n)
    expected = (k * (k + 1.0)) ** 2 * 2.0 / (2.0 * k + 1.0)
    assert np.allclose(a2, np.diag(expected), atol=1e-9)


def test_monomial_entries():
    gram = gram_matrix("monomial", 2)
    assert np.allclose(gram, [[2.0, 0.0], [0.0, 2.0 / 3.0]], atol=1e-15)
    a1 = stiffness_matrix(WeakForm.FIRST_ORDER, "monomial", 2)
    assert np.allclose(a1, [[0.0, 0.0], [0.0, 4.0 / 3.0]], atol=1e-15)


def test_weak_forms_match_strong_forms():
    rng = np.random.default_rng(11)
    for form, power in ((WeakForm.FIRST_ORDER, 1), (WeakForm.SECOND_ORDER, 2)):
        for _ in range(4):
            u = Polynomial(tuple(int(c) for c in rng.integers(-4, 5, size=6)))
            v = Polynomial(tuple(int(c) for c in rng.integers(-4, 5, size=5)))
            strong = float(_exact_integral(_apply(legendre_power(power), u) * v))
            assert abs(bilinear(form, u, v) - strong) < 1e-9 * max(1.0, abs(strong))


def test_rayleigh_quotients_are_positive():
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = Polynomial(tuple(int(c) for c in rng.integers(-3, 4, size=7)) + (1,))
        assert bilinear(WeakForm.FIRST_ORDER, u, u) > 0.0
        assert bilinear(WeakForm.SECOND_ORDER, u, u) > 0.0
    assert bilinear(WeakForm.SECOND_ORDER, Polynomial.constant(3), Polynomial.constant(3)) == 0.0


def test_jacobi_against_numpy():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((7, 7))
    a = a + a.T
    values, vectors, sweeps = jacobi_eigen(a)
    assert sweeps > 0
    assert np.allclose(np.sort(values), np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(a @ vectors, vectors * values, atol=1e-9)
    assert np.allclose(vectors.T @ vectors, np.eye(7), atol=1e-12)
    try:
        jacobi_eigen(a, max_sweeps=1)
    except EigenSolverError:
        pass
    else:
        raise AssertionError("one sweep reported convergence")


def test_generalized_problem():
    k = np.diag([3.0, 1.0, 2.0])
    values, _ = generalized_symmetric_eigen(k, np.eye(3))
    assert np.allclose(values, [1.0, 2.0, 3.0])
    values, vectors = generalized_symmetric_eigen(k, np.diag([1.0, 2.0, 4.0]))
    assert np.allclose(values, [0.5, 0.5, 3.0])
    assert np.allclose(vectors.T @ np.diag([1.0, 2.0, 4.0]) @ vectors, np.eye(3), atol=1e-12)
    try:
        generalized_symmetric_eigen(k, np.diag([1.0, -1.0, 1.0]))
    except ConditioningError:
        pass
    else:
        raise AssertionError("indefinite Gram matrix accepted")


def test_spectrum_of_a():
    result = spectrum("A", "legendre", 12)
    assert np.allclose(result.targets, target_eigenvalues("A", 12))
    assert np.max(result.errors) < 1e-9
    monomial = spectrum("A", "monomial", 8)
    assert np.max(monomial.errors[:5]) < 1e-6


def test_spectrum_of_a_squared():
    result = spectrum("A2", "legendre", 12)
    assert np.max(result.errors) <= 1e-7
    assert result.eigenvalues[0] == result.eigenvalues[0] and abs(result.eigenvalues[0]) < 1e-7
    monomial = spectrum("A^2", "monomial", 10)
    assert monomial.op == "A2"
    assert np.max(monomial.errors[:4]) < 1e-4


def test_bases_agree():
    legendre = spectrum("A2", "legendre", 9).eigenvalues
    monomial = spectrum("A2", "monomial", 9).eigenvalues
    assert np.allclose(legendre, monomial, rtol=1e-6, atol=1e-6)


def test_spectrum_output():
    result = spectrum("A", "legendre", 5)
    data = result.to_dict()
    assert data["N"] == 5 and data["op"] == "A"
    assert len(data["eigenvalues"]) == 5
    rows = result.csv_rows()
    assert rows[0] == ["index", "eigenvalue", "target", "abs_error"]
    assert rows[3][0] == 2 and abs(rows[3][2] - 6.0) < 1e-15


def test_spectrum_rejects_bad_requests():
    for op, basis, n, error in (
        ("A", "monomial", 15, ConditioningError),
        ("A", "legendre", 3, ConfigError),
        ("B", "legendre", 8, ConfigError),
        ("A", "chebyshev", 8, ConfigError),
    ):
        try:
            spectrum(op, basis, n)
        except error:
            continue
        raise AssertionError(f"spectrum({op}, {basis}, {n}) accepted")


def main():
    """Run all tests"""
    tests = [
        test_legendre_matrices_are_diagonal,
        test_monomial_entries,
        test_weak_forms_match_strong_forms,
        test_rayleigh_quotients_are_positive,
        test_jacobi_against_numpy,
        test_generalized_problem,
        test_spectrum_of_a,
        test_spectrum_of_a_squared,
        test_bases_agree,
        test_spectrum_output,
        test_spectrum_rejects_bad_requests,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} spectral tests passed")


if __name__ == "__main__":
    main()

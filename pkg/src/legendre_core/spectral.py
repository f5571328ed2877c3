"""
Legendre Lab Core Library - Spectral Module

Galerkin discretization of the weak forms of l and l^2 in a Legendre or a
monomial basis, solved as a generalized symmetric eigenproblem by Cholesky
reduction and cyclic Jacobi rotations.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .config import config
from .polynomial import Polynomial
from .quadrature import QuadratureRule, gauss_legendre_rule, legendre_derivatives
from .utils import get_logger, ConditioningError, ConfigError, EigenSolverError

logger = get_logger("spectral")

BASES = ("legendre", "monomial")


class WeakForm(str, Enum):
    FIRST_ORDER = "first-order"  # a1(u,v) = int (1-x^2) u'v'
    SECOND_ORDER = "second-order"  # a2(u,v) = int (1-x^2)^2 u''v'' + 2(1-x^2) u'v'


OPERATORS = {"A": WeakForm.FIRST_ORDER, "A2": WeakForm.SECOND_ORDER, "A^2": WeakForm.SECOND_ORDER}


def default_rule(n: int) -> QuadratureRule:
    """Exact for every a2 integrand on polynomials of degree below n"""
    return gauss_legendre_rule(n + 4)


def basis_values(basis: str, n: int, rule: QuadratureRule) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Basis functions and their first two derivatives at the rule's nodes.

    Returns:
        tuple: three arrays of shape (n, nodes) for phi, phi', phi''
    """
    x = rule.nodes
    if basis == "legendre":
        rows = [legendre_derivatives(k, x, 2) for k in range(n)]
        return tuple(np.array([r[j] for r in rows]) for j in range(3))
    if basis == "monomial":
        values = np.zeros((n, x.size))
        first = np.zeros((n, x.size))
        second = np.zeros((n, x.size))
        for k in range(n):
            values[k] = x**k
            if k >= 1:
                first[k] = k * x ** (k - 1)
            if k >= 2:
                second[k] = k * (k - 1) * x ** (k - 2)
        return values, first, second
    raise ConfigError(f"Unknown basis {basis!r}; expected one of {BASES}")


def _check_dimension(basis: str, n: int):
    limit = config.get("spectral.monomial_max_n", 14)
    if basis == "monomial" and n > limit:
        raise ConditioningError(
            f"Monomial basis with N={n} is too ill-conditioned; use N <= {limit} or the legendre basis"
        )


def stiffness_matrix(form: WeakForm, basis: str, n: int, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """Entries form(phi_i, phi_j), symmetrized"""
    _check_dimension(basis, n)
    rule = rule or default_rule(n)
    _, d1, d2 = basis_values(basis, n, rule)
    q = (1.0 - rule.nodes) * (1.0 + rule.nodes)
    w = rule.weights

    matrix = (d1 * (w * q)) @ d1.T
    if WeakForm(form) == WeakForm.SECOND_ORDER:
        matrix = 2.0 * matrix + (d2 * (w * q * q)) @ d2.T
    return 0.5 * (matrix + matrix.T)


def gram_matrix(basis: str, n: int, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """Mass entries int phi_i phi_j"""
    _check_dimension(basis, n)
    rule = rule or default_rule(n)
    values, _, _ = basis_values(basis, n, rule)
    matrix = (values * rule.weights) @ values.T
    return 0.5 * (matrix + matrix.T)


def bilinear(form: WeakForm, u: Polynomial, v: Polynomial, rule: Optional[QuadratureRule] = None) -> float:
    """form(u, v) for two exact polynomials"""
    rule = rule or default_rule(max(u.degree, v.degree, 0) + 1)
    x = rule.nodes
    q = (1.0 - x) * (1.0 + x)
    du, dv = u.derivative().evaluate(x), v.derivative().evaluate(x)
    total = np.dot(rule.weights, q * du * dv)
    if WeakForm(form) == WeakForm.SECOND_ORDER:
        d2u, d2v = u.derivative(2).evaluate(x), v.derivative(2).evaluate(x)
        total = 2.0 * total + np.dot(rule.weights, q * q * d2u * d2v)
    return float(total)


def jacobi_eigen(
    matrix: np.ndarray, tol: Optional[float] = None, max_sweeps: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Cyclic Jacobi rotations for a symmetric matrix.

    Sweeps over every (p, q) pair until the off-diagonal Frobenius norm is at
    most tol times the norm of the matrix.

    Returns:
        tuple: (eigenvalues, eigenvectors as columns, sweeps used), unsorted

    Raises:
        EigenSolverError: if max_sweeps is exhausted
    """
    tol = tol if tol is not None else config.get("spectral.offdiag_tol", 1.0e-12)
    max_sweeps = max_sweeps or config.get("spectral.max_sweeps", 100)

    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v, 0

    for sweep in range(max_sweeps + 1):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * scale:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise EigenSolverError(f"Jacobi rotations did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})")


def generalized_symmetric_eigen(k: np.ndarray, m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve K v = lambda M v for symmetric K and positive definite M.

    Returns:
        tuple: ascending eigenvalues and M-orthonormal eigenvectors as columns

    Raises:
        ConditioningError: if M cannot be factored
    """
    try:
        lower = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as e:
        raise ConditioningError(f"Gram matrix is not numerically positive definite ({e}); reduce N")

    reduced = np.linalg.solve(lower, np.linalg.solve(lower, k).T).T
    reduced = 0.5 * (reduced + reduced.T)
    values, vectors, sweeps = jacobi_eigen(reduced)
    logger.debug(f"Jacobi converged in {sweeps} sweeps for a {k.shape[0]}x{k.shape[0]} problem")

    order = np.argsort(values)
    values = values[order]
    vectors = np.linalg.solve(lower.T, vectors[:, order])
    return values, vectors


def generalized_symmetric_eigenvalues(k: np.ndarray, m: np.ndarray) -> np.ndarray:
    return generalized_symmetric_eigen(k, m)[0]


def target_eigenvalues(op: str, count: int) -> np.ndarray:
    """n(n+1) for A, n^2(n+1)^2 for A^2"""
    n = np.arange(count, dtype=float)
    base = n * (n + 1.0)
    return base if OPERATORS[op] == WeakForm.FIRST_ORDER else base * base


@dataclass
class SpectrumResult:
    op: str
    basis: str
    n: int
    eigenvalues: np.ndarray
    targets: np.ndarray
    residuals: np.ndarray = field(repr=False)

    @property
    def errors(self) -> np.ndarray:
        return np.abs(self.eigenvalues - self.targets)

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "basis": self.basis,
            "N": self.n,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "targets": [float(v) for v in self.targets],
            "abs_errors": [float(v) for v in self.errors],
            "residuals": [float(v) for v in self.residuals],
        }

    def csv_rows(self) -> List[List]:
        rows = [["index", "eigenvalue", "target", "abs_error"]]
        for i, (value, target, error) in enumerate(zip(self.eigenvalues, self.targets, self.errors)):
            rows.append([i, float(value), float(target), float(error)])
        return rows


def spectrum(op: str, basis: str, n: int) -> SpectrumResult:
    """
    Galerkin eigenvalues of A (op 'A') or A^2 (op 'A2') with n basis functions.

    Raises:
        ConfigError: unknown op or basis, or n < 4
        ConditioningError: monomial basis beyond its dimension cap
    """
    if op not in OPERATORS:
        raise ConfigError(f"Unknown operator {op!r}; expected A or A2")
    if basis not in BASES:
        raise ConfigError(f"Unknown basis {basis!r}; expected one of {BASES}")
    if n < 4:
        raise ConfigError(f"Spectrum needs N >= 4, got {n}")

    rule = default_rule(n)
    k = stiffness_matrix(OPERATORS[op], basis, n, rule)
    m = gram_matrix(basis, n, rule)
    values, vectors = generalized_symmetric_eigen(k, m)
    residuals = np.linalg.norm(k @ vectors - (m @ vectors) * values, axis=0)

    negative = values < -1.0e-10
    if np.any(negative):
        logger.warning(f"Negative eigenvalues {values[negative]} for {op} in the {basis} basis")

    logger.info(f"Solved {op} spectrum with N={n} in the {basis} basis")
    return SpectrumResult(
        op="A2" if OPERATORS[op] == WeakForm.SECOND_ORDER else "A",
        basis=basis,
        n=n,
        eigenvalues=values,
        targets=target_eigenvalues(op, n),
        residuals=residuals,
    )

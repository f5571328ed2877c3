"""
Legendre Lab Core Library - Quadrature Module

Legendre polynomial evaluation, Gauss-Legendre rules, adaptive integration on
smooth intervals and geometrically graded integration toward singular endpoints.
"""

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .config import config
from .utils import get_logger, QuadratureError

logger = get_logger("quadrature")

NEWTON_TOL = 1.0e-15
NEWTON_MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on (-1, 1)"""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def scaled(self, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped to [a, b]"""
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        return mid + half * self.nodes, half * self.weights

    def apply(self, f: Callable, a: float = -1.0, b: float = 1.0) -> float:
        nodes, weights = self.scaled(a, b)
        return float(np.dot(weights, _sample(f, nodes)))


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of an adaptive or graded integration"""

    value: float
    error_estimate: float
    converged: bool
    evaluations: int
    divergent: bool = False
    shells: Tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error": self.error_estimate,
            "converged": self.converged,
            "divergent": self.divergent,
            "evaluations": self.evaluations,
            "shells": list(self.shells),
        }


def legendre_eval(n: int, x):
    """P_n(x) by the three-term recurrence; works on scalars and arrays"""
    if n < 0:
        raise ValueError("Legendre degree must be non-negative")
    x = np.asarray(x, dtype=float)
    previous = np.ones_like(x)
    if n == 0:
        return previous if previous.ndim else float(previous)
    current = x.copy()
    for k in range(1, n):
        previous, current = current, ((2 * k + 1) * x * current - k * previous) / (k + 1)
    return current if current.ndim else float(current)


def legendre_derivatives(n: int, x, k: int) -> tuple:
    """
    P_n and its first k derivatives at x.

    Uses P_{m+1}^{(j)} = P_{m-1}^{(j)} + (2m+1) P_m^{(j-1)}, which is exact
    for every j and gives identically zero once j exceeds n.

    Args:
        n: Degree
        x: Point or array of points
        k: Highest derivative order (at most 4)

    Returns:
        tuple: (P_n(x), P_n'(x), ..., P_n^{(k)}(x))
    """
    if n < 0:
        raise ValueError("Legendre degree must be non-negative")
    if not 0 <= k <= 4:
        raise ValueError("Derivative order must lie in 0..4")

    x = np.asarray(x, dtype=float)
    # table[j][m] = P_m^{(j)}(x)
    table = [[None] * (n + 1) for _ in range(k + 1)]
    for j in range(k + 1):
        for m in range(n + 1):
            if m == 0:
                value = np.ones_like(x) if j == 0 else np.zeros_like(x)
            elif m == 1:
                if j == 0:
                    value = x.copy()
                elif j == 1:
                    value = np.ones_like(x)
                else:
                    value = np.zeros_like(x)
            elif j == 0:
                value = ((2 * m - 1) * x * table[0][m - 1] - (m - 1) * table[0][m - 2]) / m
            else:
                value = table[j][m - 2] + (2 * m - 1) * table[j - 1][m - 1]
            table[j][m] = value

    values = tuple(table[j][n] for j in range(k + 1))
    if x.ndim == 0:
        return tuple(float(v) for v in values)
    return values


@lru_cache(maxsize=256)
def gauss_legendre_rule(m: int) -> QuadratureRule:
    """
    Gauss-Legendre rule with m nodes.

    Nodes are the roots of P_m found by Newton iteration from the Chebyshev
    guesses cos(pi (2i+1) / 2m); weights are 2 / ((1 - x^2) P_m'(x)^2).
    """
    if m < 1:
        raise ValueError("Quadrature rule needs at least one node")

    x = np.cos(np.pi * (2 * np.arange(m) + 1) / (2 * m))
    for iteration in range(NEWTON_MAX_ITER):
        p, dp = _legendre_with_derivative(m, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= NEWTON_TOL:
            break
    else:
        raise QuadratureError(
            f"Newton iteration for the roots of P_{m} did not converge "
            f"after {NEWTON_MAX_ITER} iterations"
        )

    _, dp = _legendre_with_derivative(m, x)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    x = x[order]
    weights = weights[order]
    x = 0.5 * (x - x[::-1])
    weights = 0.5 * (weights + weights[::-1])

    x.setflags(write=False)
    weights.setflags(write=False)
    logger.debug(f"Built Gauss-Legendre rule with {m} nodes in {iteration + 1} iterations")
    return QuadratureRule(nodes=x, weights=weights, order=m)


def _legendre_with_derivative(m: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    previous = np.ones_like(x)
    current = x.copy()
    for k in range(1, m):
        previous, current = current, ((2 * k + 1) * x * current - k * previous) / (k + 1)
    derivative = m * (x * current - previous) / (x * x - 1.0)
    return current, derivative


def _sample(f: Callable, nodes: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of nodes, vectorizing scalar-only callables"""
    try:
        values = f(nodes)
    except (TypeError, ValueError):
        values = np.vectorize(f, otypes=[float])(nodes)
    values = np.broadcast_to(np.asarray(values, dtype=float), nodes.shape)
    if not np.all(np.isfinite(values)):
        bad = nodes[~np.isfinite(values)]
        raise QuadratureError(f"Integrand is not finite at x = {bad[0]!r}")
    return values


def integrate(
    f: Callable,
    a: float,
    b: float,
    tol: Optional[float] = None,
    rel_tol: float = 0.0,
    max_intervals: Optional[int] = None,
) -> IntegralEstimate:
    """
    Adaptive bisection with a pair of Gauss rules (m and 2m+1 nodes).

    The interval with the largest error estimate is split until the summed
    error is below max(tol, rel_tol * |value|) or the interval budget runs out.

    Args:
        f: Vectorized callable (scalar callables are wrapped)
        a: Lower limit
        b: Upper limit, b > a
        tol: Absolute tolerance (config quadrature.tol)
        rel_tol: Relative tolerance
        max_intervals: Bisection budget (config quadrature.max_intervals)

    Returns:
        IntegralEstimate
    """
    if not b > a:
        raise ValueError(f"integrate needs a < b, got [{a}, {b}]")

    tol = tol if tol is not None else config.get("quadrature.tol", 1.0e-10)
    max_intervals = max_intervals or config.get("quadrature.max_intervals", 4000)
    m = config.get("quadrature.base_nodes", 10)
    low_rule = gauss_legendre_rule(m)
    high_rule = gauss_legendre_rule(2 * m + 1)
    evaluations = 0

    def estimate(lo: float, hi: float) -> Tuple[float, float]:
        nonlocal evaluations
        coarse = low_rule.apply(f, lo, hi)
        fine = high_rule.apply(f, lo, hi)
        evaluations += low_rule.order + high_rule.order
        return fine, abs(fine - coarse)

    value, error = estimate(a, b)
    heap: List[Tuple[float, float, float, float, float]] = [(-error, a, b, value, error)]
    settled: List[Tuple[float, float]] = []
    intervals = 1
    total_value, total_error = value, error

    while heap and total_error > max(tol, rel_tol * abs(total_value)):
        if intervals >= max_intervals:
            break
        _, lo, hi, value, error = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            settled.append((value, error))
            continue
        left_value, left_error = estimate(lo, mid)
        right_value, right_error = estimate(mid, hi)
        heapq.heappush(heap, (-left_error, lo, mid, left_value, left_error))
        heapq.heappush(heap, (-right_error, mid, hi, right_value, right_error))
        intervals += 1
        total_value += left_value + right_value - value
        total_error += left_error + right_error - error

    pieces = [(item[3], item[4]) for item in heap] + settled
    total_value = math.fsum(v for v, _ in pieces)
    total_error = math.fsum(e for _, e in pieces)
    converged = total_error <= max(tol, rel_tol * abs(total_value))
    if not converged:
        logger.debug(
            f"integrate on [{a}, {b}] stopped after {intervals} intervals "
            f"with error {total_error:.3e}"
        )
    return IntegralEstimate(
        value=total_value,
        error_estimate=total_error,
        converged=converged,
        evaluations=evaluations,
    )


def integrate_graded(
    f: Callable,
    anchor: float,
    endpoint: float,
    tol: Optional[float] = None,
    rel_tol: float = 0.0,
    max_shells: Optional[int] = None,
) -> IntegralEstimate:
    """
    Integrate from anchor toward a possibly singular endpoint.

    Shell k covers the points whose distance to the endpoint lies in
    [L 2^-(k+1), L 2^-k], L = |endpoint - anchor|. Summation stops when a
    geometric tail fitted to the last shells is below tolerance. Shell
    contributions that do not decrease over `divergence_window` shells, or
    whose ratios all stay above 0.98, flag the integral as divergent.

    Returns:
        IntegralEstimate with the signed value from anchor to endpoint
    """
    tol = tol if tol is not None else config.get("quadrature.graded_tol", 1.0e-8)
    max_shells = max_shells or config.get("quadrature.max_shells", 40)
    window = config.get("quadrature.divergence_window", 8)
    ratio_max = config.get("quadrature.tail_ratio_max", 0.9375)

    length = abs(endpoint - anchor)
    direction = 1.0 if endpoint > anchor else -1.0
    shell_tol = tol / max_shells

    contributions: List[float] = []
    quad_error = 0.0
    evaluations = 0
    shells_converged = True
    previous_tail: Optional[float] = None

    for k in range(max_shells):
        near = endpoint - direction * length * 2.0 ** (-k - 1)
        far = endpoint - direction * length * 2.0 ** (-k)
        lo, hi = min(near, far), max(near, far)
        shell = integrate(f, lo, hi, tol=shell_tol, rel_tol=rel_tol)
        contributions.append(direction * shell.value)
        quad_error += shell.error_estimate
        evaluations += shell.evaluations
        shells_converged = shells_converged and shell.converged

        partial = math.fsum(contributions)
        if _is_divergent(contributions, window):
            logger.debug(f"Shell sums toward {endpoint} flagged divergent after {k + 1} shells")
            return IntegralEstimate(
                value=partial,
                error_estimate=abs(partial),
                converged=False,
                evaluations=evaluations,
                divergent=True,
                shells=tuple(contributions),
            )

        tail = _tail_estimate(contributions, ratio_max)
        if tail is not None:
            target = max(tol, rel_tol * abs(partial))
            change = abs(contributions[-1] + tail - previous_tail) if previous_tail is not None else math.inf
            if abs(tail) <= 0.5 * target and change <= 0.5 * target:
                error = change + quad_error
                return IntegralEstimate(
                    value=partial + tail,
                    error_estimate=error,
                    converged=shells_converged and error <= target,
                    evaluations=evaluations,
                    shells=tuple(contributions),
                )
        previous_tail = tail

    partial = math.fsum(contributions)
    tail = _tail_estimate(contributions, ratio_max)
    target = max(tol, rel_tol * abs(partial))
    if tail is not None:
        prior = _tail_estimate(contributions[:-1], ratio_max)
        change = abs(contributions[-1] + tail - prior) if prior is not None else abs(tail)
        error = change + quad_error
        converged = shells_converged and error <= target
        value = partial + tail
    else:
        error = abs(contributions[-1]) + quad_error
        converged = False
        value = partial

    if not converged:
        logger.warning(
            f"Graded integral toward {endpoint} not converged after {max_shells} shells "
            f"(error {error:.3e})"
        )
    return IntegralEstimate(
        value=value,
        error_estimate=error,
        converged=converged,
        evaluations=evaluations,
        shells=tuple(contributions),
    )


def _is_divergent(contributions: Sequence[float], window: int) -> bool:
    if len(contributions) < window:
        return False
    recent = [abs(c) for c in contributions[-window:]]
    if min(recent) == 0.0:
        return False
    if all(b >= a * (1.0 - 1.0e-6) for a, b in zip(recent, recent[1:])):
        return True
    return all(b / a >= 0.98 for a, b in zip(recent, recent[1:]))


def _tail_estimate(contributions: Sequence[float], ratio_max: float) -> Optional[float]:
    """Geometric tail from the last three shell contributions"""
    if len(contributions) < 3:
        return None
    c2, c1, c0 = contributions[-3], contributions[-2], contributions[-1]
    if c1 == 0.0 and c0 == 0.0:
        return 0.0
    if c2 == 0.0 or c1 == 0.0:
        return None
    if c0 != 0.0 and (c0 > 0) != (c1 > 0):
        return None
    r_new = abs(c0) / abs(c1)
    r_old = abs(c1) / abs(c2)
    if r_new > ratio_max or r_old > ratio_max:
        return None
    if abs(r_new - r_old) > 0.25 * (1.0 - r_new):
        return None
    return c0 * r_new / (1.0 - r_new)


def integrate_endpoint_graded(
    f: Callable, side: int, tol: Optional[float] = None, rel_tol: float = 0.0
) -> IntegralEstimate:
    """Integrate f over [0, 1) for side=+1 or over (-1, 0] for side=-1"""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    estimate = integrate_graded(f, 0.0, float(side), tol=tol, rel_tol=rel_tol)
    if side == -1:
        # graded integration runs from 0 toward -1; flip to the (-1, 0] orientation
        return IntegralEstimate(
            value=-estimate.value,
            error_estimate=estimate.error_estimate,
            converged=estimate.converged,
            evaluations=estimate.evaluations,
            divergent=estimate.divergent,
            shells=tuple(-c for c in estimate.shells),
        )
    return estimate


def integrate_two_sided(
    f: Callable,
    a: float = -1.0,
    b: float = 1.0,
    tol: Optional[float] = None,
    rel_tol: float = 0.0,
) -> IntegralEstimate:
    """Integrate over (a, b), grading toward both ends from the midpoint"""
    mid = 0.5 * (a + b)
    left = integrate_graded(f, mid, a, tol=tol, rel_tol=rel_tol)
    right = integrate_graded(f, mid, b, tol=tol, rel_tol=rel_tol)
    return IntegralEstimate(
        value=right.value - left.value,
        error_estimate=left.error_estimate + right.error_estimate,
        converged=left.converged and right.converged,
        evaluations=left.evaluations + right.evaluations,
        divergent=left.divergent or right.divergent,
        shells=tuple(-c for c in left.shells) + right.shells,
    )

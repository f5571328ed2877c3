"""
Legendre Lab Core Library - Operator Module

Exact composite powers of the Legendre expression l[y] = -((1 - x^2) y')':
Legendre-Stirling numbers, structured and expanded operator forms,
composition, symbolic and numeric application, and indicial roots at +-1.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .polynomial import Polynomial, ONE_MINUS_X2
from .utils import get_logger, format_fraction, to_fraction, OperatorError
from . import expr as E

logger = get_logger("operators")

# Deficiency indices of the minimal operators generated by l and l^2
DEFICIENCY_INDICES: Dict[int, Tuple[int, int]] = {1: (2, 2), 2: (4, 4)}


def legendre_stirling(n: int, j: int) -> int:
    """
    Legendre-Stirling number {n j} by the closed summation formula.

    {n j} = sum_{r=0}^{j} (-1)^(r+j) (2r+1) (r^2+r)^n / ((j-r)! (j+r+1)!)

    Raises:
        ValueError: unless 1 <= j <= n
        OperatorError: if the exact sum is not an integer
    """
    if n < 1 or not 1 <= j <= n:
        raise ValueError(f"Legendre-Stirling numbers need 1 <= j <= n, got n={n}, j={j}")

    total = Fraction(0)
    for r in range(j + 1):
        sign = -1 if (r + j) % 2 else 1
        total += Fraction(sign * (2 * r + 1) * (r * r + r) ** n, factorial(j - r) * factorial(j + r + 1))

    if total.denominator != 1:
        raise OperatorError(f"Legendre-Stirling sum for ({n}, {j}) is not an integer: {total}")
    return total.numerator


def legendre_stirling_triangle(rows: int) -> List[List[int]]:
    """
    Rows 1..rows of the triangle from {n j} = {n-1 j-1} + j(j+1) {n-1 j}.

    Returns:
        list: row n holds {n 1}, ..., {n n}
    """
    if rows < 1:
        raise ValueError("The triangle needs at least one row")

    previous = [1]  # {0 0}
    triangle = []
    for n in range(1, rows + 1):
        current = [0] * (n + 1)
        for j in range(1, n + 1):
            left = previous[j - 1] if j - 1 < len(previous) else 0
            right = previous[j] if j < len(previous) else 0
            current[j] = left + j * (j + 1) * right
        triangle.append(current[1:])
        previous = current
    return triangle


def stirling_mismatches(rows: int) -> List[Tuple[int, int, int, int]]:
    """Entries where the recurrence and the summation formula disagree"""
    mismatches = []
    for n, row in enumerate(legendre_stirling_triangle(rows), start=1):
        for j, value in enumerate(row, start=1):
            direct = legendre_stirling(n, j)
            if direct != value:
                mismatches.append((n, j, value, direct))
    return mismatches


@dataclass(frozen=True)
class StructuredOperator:
    """sum_j s_j ((1 - x^2)^j y^(j))^(j)"""

    terms: Tuple[Tuple[int, Fraction], ...]
    label: str = ""

    def __post_init__(self):
        indices = [j for j, _ in self.terms]
        if len(set(indices)) != len(indices):
            raise OperatorError(f"Repeated derivative index in {self.terms}")
        if any(j < 1 for j in indices):
            raise OperatorError("Derivative indices must be at least 1")
        normalized = tuple(sorted((int(j), Fraction(s)) for j, s in self.terms))
        object.__setattr__(self, "terms", normalized)

    @property
    def order(self) -> int:
        return 2 * max((j for j, _ in self.terms), default=0)

    @property
    def max_index(self) -> int:
        return max((j for j, _ in self.terms), default=0)

    def to_json(self) -> Dict[str, Any]:
        return {"structured": [[j, format_fraction(s)] for j, s in self.terms]}


@lru_cache(maxsize=None)
def legendre_power(n: int) -> StructuredOperator:
    """l^n with coefficients s_j = (-1)^j {n j}"""
    if n < 1:
        raise ValueError("Operator power must be at least 1")
    terms = tuple((j, Fraction((-1) ** j * legendre_stirling(n, j))) for j in range(1, n + 1))
    return StructuredOperator(terms, label=f"l^{n}")


@dataclass(frozen=True)
class ExpandedOperator:
    """sum_k a_k(x) y^(k) with exact polynomial coefficients"""

    coeffs: Tuple[Polynomial, ...]

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def identity(cls) -> "ExpandedOperator":
        return cls((Polynomial.constant(1),))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Polynomial:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Polynomial()

    def to_json(self) -> Dict[str, Any]:
        return {
            "expanded": [[format_fraction(c) for c in a.coeffs] or ["0"] for a in self.coeffs]
        }

    def describe(self) -> List[str]:
        """'a_k = ...' lines, highest order first"""
        return [f"a_{k} = {self.coeffs[k]}" for k in range(self.order, -1, -1)]


def expand(op: StructuredOperator) -> ExpandedOperator:
    """Leibniz expansion of each ((1-x^2)^j y^(j))^(j)"""
    size = op.order + 1
    coeffs = [Polynomial() for _ in range(max(size, 1))]
    for j, s in op.terms:
        weight = ONE_MINUS_X2**j
        for i in range(j + 1):
            coeffs[j + i] = coeffs[j + i] + weight.derivative(j - i).scale(s * comb(j, i))
    return ExpandedOperator(tuple(coeffs))


def compose(p: ExpandedOperator, q: ExpandedOperator) -> ExpandedOperator:
    """p o q: sum_k p_k D^k (sum_i q_i y^(i))"""
    size = p.order + q.order + 1
    coeffs = [Polynomial() for _ in range(max(size, 1))]
    for k, pk in enumerate(p.coeffs):
        if pk.is_zero():
            continue
        for i, qi in enumerate(q.coeffs):
            for l in range(k + 1):
                term = qi.derivative(k - l)
                if term.is_zero():
                    continue
                coeffs[i + l] = coeffs[i + l] + pk * term.scale(comb(k, l))
    return ExpandedOperator(tuple(coeffs))


def composition_mismatches(max_power: int) -> List[int]:
    """Powers n <= max_power whose Stirling expansion differs from the n-fold composition"""
    base = expand(legendre_power(1))
    composed = ExpandedOperator.identity()
    failures = []
    for n in range(1, max_power + 1):
        composed = compose(base, composed)
        if expand(legendre_power(n)) != composed:
            logger.error(f"Expansion of l^{n} differs from the {n}-fold composition")
            failures.append(n)
    return failures


OperatorLike = Union[StructuredOperator, ExpandedOperator]


def _expanded(op: OperatorLike) -> ExpandedOperator:
    return expand(op) if isinstance(op, StructuredOperator) else op


def apply_symbolic(op: OperatorLike, f: "E.Expr") -> "E.Expr":
    """sum_k a_k f^(k) as a normalized expression"""
    from .normal import NormalForm, to_normal, from_normal

    op = _expanded(op)
    form = to_normal(f)
    if form is None:
        ladder = E.derivative_ladder(f, op.order)
        return E.add(*(E.mul(E.poly_expr(a), ladder[k]) for k, a in enumerate(op.coeffs)))

    result = NormalForm()
    for k, a in enumerate(op.coeffs):
        if not a.is_zero():
            result = result + form * NormalForm.polynomial(a)
        form = form.derivative()
    return from_normal(result)


def apply_structured_symbolic(op: StructuredOperator, f: "E.Expr") -> Optional["E.Expr"]:
    """sum_j s_j ((1-x^2)^j f^(j))^(j) without expanding the operator"""
    from .normal import NormalForm, to_normal, from_normal

    form = to_normal(f)
    if form is None:
        return None
    ladder = form.derivatives(op.max_index)
    result = NormalForm()
    for j, s in op.terms:
        inner = ladder[j] * NormalForm.polynomial((ONE_MINUS_X2**j).scale(s))
        for _ in range(j):
            inner = inner.derivative()
        result = result + inner
    return from_normal(result)


def apply_numeric(op: OperatorLike, derivs: Sequence, x) -> float:
    """sum_k a_k(x) derivs[k] for derivs = (f(x), f'(x), ..., f^(order)(x))"""
    op = _expanded(op)
    if len(derivs) != op.order + 1:
        raise ValueError(f"Expected {op.order + 1} derivative values, got {len(derivs)}")
    total = 0.0
    for a, d in zip(op.coeffs, derivs):
        if not a.is_zero():
            total = total + a.evaluate(x) * np.asarray(d, dtype=float)
    if np.ndim(total) == 0:
        return float(total)
    return total


def indicial_polynomial(op: StructuredOperator, endpoint: int) -> Polynomial:
    """
    Indicial polynomial I(r) at endpoint +1 or -1.

    The operator is applied exactly to (1 - x)^m (or (1 + x)^m) for the
    integers m = order..2*order; the coefficient of the lowest power
    t^(m-n), t the distance to the endpoint and n the largest derivative
    index, gives I(m). I is interpolated exactly and checked against one
    extra sample.

    Raises:
        OperatorError: if the extra sample disagrees with the fitted polynomial
    """
    if endpoint not in (1, -1):
        raise ValueError("endpoint must be +1 or -1")

    expanded = expand(op)
    n = op.max_index
    # x = 1 - t at +1, x = t - 1 at -1
    shift = (1, -1) if endpoint == 1 else (-1, 1)
    base = Polynomial.linear(1, -endpoint)

    def sample(m: int) -> Fraction:
        y = base**m
        image = Polynomial()
        for k, a in enumerate(expanded.coeffs):
            image = image + a * y.derivative(k)
        return image.shift(*shift).coefficient(m - n)

    points = list(range(op.order, 2 * op.order + 1))
    values = [sample(m) for m in points]
    fitted = _lagrange(points, values)

    extra = 2 * op.order + 1
    if fitted(extra) != sample(extra):
        raise OperatorError(
            f"Indicial interpolation for {op.label or 'operator'} disagrees at m={extra}"
        )
    return fitted


def _lagrange(points: Sequence[int], values: Sequence[Fraction]) -> Polynomial:
    result = Polynomial()
    for i, (mi, yi) in enumerate(zip(points, values)):
        if yi == 0:
            continue
        basis = Polynomial.constant(1)
        for j, mj in enumerate(points):
            if j != i:
                basis = basis * Polynomial.linear(Fraction(-mj, mi - mj), Fraction(1, mi - mj))
        result = result + basis.scale(yi)
    return result


def indicial_roots(op: StructuredOperator, endpoint: int) -> List[Fraction]:
    """Roots of the indicial polynomial with multiplicity, ascending"""
    poly = indicial_polynomial(op, endpoint)
    if poly.is_zero():
        raise OperatorError("Indicial polynomial vanishes identically")
    roots = []
    for r, multiplicity in poly.rational_roots():
        roots.extend([r] * multiplicity)
    if len(roots) < poly.degree:
        logger.warning(f"Indicial polynomial {poly} has irrational or complex roots")
    return roots


def operator_from_json(data: Dict[str, Any]) -> OperatorLike:
    """Inverse of to_json for either operator form"""
    try:
        if "structured" in data:
            return StructuredOperator(
                tuple((int(j), to_fraction(s)) for j, s in data["structured"]),
                label=str(data.get("label", "")),
            )
        if "expanded" in data:
            return ExpandedOperator(
                tuple(Polynomial(tuple(to_fraction(c) for c in a)) for a in data["expanded"])
            )
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise OperatorError(f"Malformed operator description: {e}")
    raise OperatorError("Operator description needs a 'structured' or 'expanded' key")

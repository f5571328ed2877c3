"""
Legendre Lab Core Library - Boundary Forms Module

The sesquilinear forms [.,.]_1 and [.,.]_2, the boundary functionals
B1 = (1-x^2) f' and B2 = ((1-x^2)^2 f'')', endpoint limits by extrapolation
along the ladder x = +-(1 - 2^-k), Green's formula residuals, and the GKN
boundary-condition functions f1..f4 with their log companions g1..g4.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from .config import config
from .polynomial import Polynomial, ONE_MINUS_X2
from .quadrature import integrate
from .utils import (
    get_logger,
    parse_endpoint,
    ConfigError,
    EvaluationError,
    ExtrapolationError,
    QuadratureError,
)
from . import expr as E

logger = get_logger("forms")

# Raw differences must shrink by this factor before extrapolants are trusted
CONTRACTION_RATIO = 0.95
RICHARDSON_LEVELS = 3


def _q(x):
    """1 - x^2 without cancellation near the endpoints"""
    return (1.0 - x) * (1.0 + x)


class SmoothFunction(Protocol):
    label: str

    def derivatives(self, x, order: int) -> List:
        """[f(x), f'(x), ..., f^(order)(x)]"""
        ...

    def germ(self, endpoint: int) -> Optional["ExprFunction"]:
        """Closed form that coincides with the function near the endpoint"""
        ...


class ExprFunction:
    """An expression with a cached derivative ladder"""

    def __init__(self, expr: "E.Expr", label: Optional[str] = None):
        self.expr = expr
        self.label = label or E.to_text(expr)
        self._ladder: List[E.Expr] = [expr]

    def ladder(self, order: int) -> List["E.Expr"]:
        if len(self._ladder) <= order:
            self._ladder = E.derivative_ladder(self.expr, order)
        return self._ladder[: order + 1]

    def derivatives(self, x, order: int) -> List:
        return [E.evaluate(d, x) for d in self.ladder(order)]

    def germ(self, endpoint: int) -> "ExprFunction":
        return self

    def __call__(self, x):
        return E.evaluate(self.expr, x)

    def __repr__(self) -> str:
        return f"ExprFunction({self.label!r})"


FunctionLike = Union[SmoothFunction, "E.Expr", str]


def as_function(f: FunctionLike) -> SmoothFunction:
    if isinstance(f, str):
        return ExprFunction(E.parse(f))
    if isinstance(f, E.Expr):
        return ExprFunction(f)
    return f


# BC functions

BC_PROFILES: Dict[str, Tuple[str, str]] = {
    # tag: (profile near -1, profile near +1)
    "f1": ("0", "1"),
    "f2": ("1", "0"),
    "f3": ("0", "x"),
    "f4": ("x", "0"),
    "g1": ("0", "ln(1-x)"),
    "g2": ("ln(1+x)", "0"),
    "g3": ("0", "(1-x)*ln(1-x)"),
    "g4": ("(1+x)*ln(1+x)", "0"),
}

BLEND_DERIVATIVES = 4


class BCFunction:
    """
    Piecewise function equal to one profile on (-1, -1+delta], another on
    [1-delta, 1), joined by the degree-9 Hermite polynomial that matches
    four derivatives at both junctions.
    """

    def __init__(self, tag: str, delta: Optional[float] = None):
        if tag not in BC_PROFILES:
            raise ConfigError(f"Unknown BC function {tag!r}; expected one of {sorted(BC_PROFILES)}")
        delta = delta if delta is not None else config.get("bc.plateau_width", 0.25)
        if not 0.0 < delta < 0.5:
            raise ConfigError(f"Plateau width must lie in (0, 0.5), got {delta}")

        self.tag = tag
        self.label = tag
        self.delta = float(delta)
        left_text, right_text = BC_PROFILES[tag]
        self.left = ExprFunction(E.parse(left_text))
        self.right = ExprFunction(E.parse(right_text))
        self.x_left = -1.0 + self.delta
        self.x_right = 1.0 - self.delta
        self.width = self.x_right - self.x_left
        self.blend = self._hermite_coefficients()

    def _hermite_coefficients(self) -> np.ndarray:
        m = BLEND_DERIVATIVES
        size = 2 * (m + 1)
        left = self.left.derivatives(self.x_left, m)
        right = self.right.derivatives(self.x_right, m)

        matrix = np.zeros((size, size))
        rhs = np.zeros(size)
        for k in range(m + 1):
            scale = self.width**k
            # p^(k)(0) and p^(k)(1) for p(s) = sum_i c_i s^i
            matrix[k, k] = float(np.prod(np.arange(1, k + 1)))
            rhs[k] = scale * left[k]
            for i in range(k, size):
                matrix[m + 1 + k, i] = float(np.prod(np.arange(i - k + 1, i + 1)))
            rhs[m + 1 + k] = scale * right[k]
        return np.linalg.solve(matrix, rhs)

    def derivatives(self, x, order: int) -> List:
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x)
        out = [np.zeros_like(flat) for _ in range(order + 1)]

        left_mask = flat <= self.x_left
        right_mask = flat >= self.x_right
        middle = ~(left_mask | right_mask)

        for mask, profile in ((left_mask, self.left), (right_mask, self.right)):
            if np.any(mask):
                for k, values in enumerate(profile.derivatives(flat[mask], order)):
                    out[k][mask] = values

        if np.any(middle):
            s = (flat[middle] - self.x_left) / self.width
            coeffs = self.blend
            for k in range(order + 1):
                out[k][middle] = np.polynomial.polynomial.polyval(s, coeffs) / self.width**k
                coeffs = np.polynomial.polynomial.polyder(coeffs)

        if x.ndim == 0:
            return [float(values[0]) for values in out]
        return [values.reshape(x.shape) for values in out]

    def germ(self, endpoint: int) -> ExprFunction:
        return self.right if endpoint == 1 else self.left

    def __call__(self, x):
        return self.derivatives(x, 0)[0]

    def __repr__(self) -> str:
        return f"BCFunction({self.tag!r}, delta={self.delta})"


# Pointwise forms


def form1(f: FunctionLike, g: FunctionLike, x):
    """[f,g]_1(x) = -(1-x^2)(f' g - f g')"""
    fd = as_function(f).derivatives(x, 1)
    gd = as_function(g).derivatives(x, 1)
    return -_q(x) * (fd[1] * gd[0] - fd[0] * gd[1])


def _b2_from(d: Sequence, x):
    q = _q(x)
    return q * q * d[3] - 4.0 * x * q * d[2]


def form2(f: FunctionLike, g: FunctionLike, x):
    """[f,g]_2(x), the six-term form with ((1-x^2)^2 h'')' expanded"""
    fd = as_function(f).derivatives(x, 3)
    gd = as_function(g).derivatives(x, 3)
    q = _q(x)
    p = q * q
    return (
        _b2_from(fd, x) * gd[0]
        - _b2_from(gd, x) * fd[0]
        - p * fd[2] * gd[1]
        + p * fd[1] * gd[2]
        - 2.0 * q * fd[1] * gd[0]
        + 2.0 * q * fd[0] * gd[1]
    )


def bracket_with_one(f: FunctionLike, x):
    """[f,1]_2(x) = (1-x^2)^2 f''' - 4x(1-x^2) f'' - 2(1-x^2) f'"""
    d = as_function(f).derivatives(x, 3)
    return _b2_from(d, x) - 2.0 * _q(x) * d[1]


def bracket_with_x(f: FunctionLike, x):
    """[f,x]_2(x) = x [f,1]_2(x) - (1-x^2)^2 f'' + 2(1-x^2) f"""
    f = as_function(f)
    d = f.derivatives(x, 2)
    q = _q(x)
    return x * bracket_with_one(f, x) - q * q * d[2] + 2.0 * q * d[0]


def functional_B1(f: FunctionLike, x):
    d = as_function(f).derivatives(x, 1)
    return _q(x) * d[1]


def functional_B2(f: FunctionLike, x):
    return _b2_from(as_function(f).derivatives(x, 3), x)


# Symbolic forms, exact and normalized when the normal form exists


def _symbolic_ladder(f: "E.Expr", order: int):
    from .normal import NormalForm, to_normal, from_normal

    form = to_normal(f)
    if form is None:
        return E.derivative_ladder(f, order), E.poly_expr, lambda e: e
    return form.derivatives(order), NormalForm.polynomial, from_normal


def b1_expr(f: "E.Expr") -> "E.Expr":
    d, lift, done = _symbolic_ladder(f, 1)
    return done(lift(ONE_MINUS_X2) * d[1])


def b2_expr(f: "E.Expr") -> "E.Expr":
    d, lift, done = _symbolic_ladder(f, 3)
    return done(_b2_symbolic(d, lift))


def _b2_symbolic(d, lift):
    weight = ONE_MINUS_X2 * ONE_MINUS_X2
    cross = (Polynomial.x() * ONE_MINUS_X2).scale(4)
    return lift(weight) * d[3] - lift(cross) * d[2]


def bracket_one_expr(f: "E.Expr") -> "E.Expr":
    d, lift, done = _symbolic_ladder(f, 3)
    return done(_b2_symbolic(d, lift) - lift(ONE_MINUS_X2.scale(2)) * d[1])


def bracket_x_expr(f: "E.Expr") -> "E.Expr":
    d, lift, done = _symbolic_ladder(f, 3)
    x = Polynomial.x()
    weight = ONE_MINUS_X2 * ONE_MINUS_X2
    bracket_one = _b2_symbolic(d, lift) - lift(ONE_MINUS_X2.scale(2)) * d[1]
    return done(lift(x) * bracket_one - lift(weight) * d[2] + lift(ONE_MINUS_X2.scale(2)) * d[0])


def form1_expr(f: "E.Expr", g: "E.Expr") -> "E.Expr":
    fd, lift, done = _symbolic_ladder(f, 1)
    gd, _, _ = _symbolic_ladder(g, 1)
    if type(fd[0]) is not type(gd[0]):
        fd, lift, done = E.derivative_ladder(f, 1), E.poly_expr, lambda e: e
        gd = E.derivative_ladder(g, 1)
    return done(lift(-ONE_MINUS_X2) * (fd[1] * gd[0] - fd[0] * gd[1]))


def form2_expr(f: "E.Expr", g: "E.Expr") -> "E.Expr":
    fd, lift, done = _symbolic_ladder(f, 3)
    gd, _, _ = _symbolic_ladder(g, 3)
    if type(fd[0]) is not type(gd[0]):
        fd, lift, done = E.derivative_ladder(f, 3), E.poly_expr, lambda e: e
        gd = E.derivative_ladder(g, 3)
    weight = lift(ONE_MINUS_X2 * ONE_MINUS_X2)
    q2 = lift(ONE_MINUS_X2.scale(2))
    return done(
        _b2_symbolic(fd, lift) * gd[0]
        - _b2_symbolic(gd, lift) * fd[0]
        - weight * fd[2] * gd[1]
        + weight * fd[1] * gd[2]
        - q2 * fd[1] * gd[0]
        + q2 * fd[0] * gd[1]
    )


# Endpoint limits


@dataclass(frozen=True)
class BoundaryLimit:
    """Extrapolated limit of a functional at +1 or -1"""

    estimate: float
    error_estimate: float
    converged: bool
    samples: Tuple[Tuple[float, float], ...] = field(repr=False)
    endpoint: int = 1
    label: str = ""
    method: str = "raw"

    def is_zero(self, abs_tol: Optional[float] = None) -> bool:
        abs_tol = abs_tol if abs_tol is not None else config.get("limits.zero_abs_tol", 1.0e-7)
        return self.converged and abs(self.estimate) <= max(abs_tol, 10.0 * self.error_estimate)

    def to_dict(self) -> dict:
        return {
            "functional": self.label,
            "endpoint": self.endpoint,
            "estimate": self.estimate,
            "error": self.error_estimate,
            "converged": self.converged,
            "method": self.method,
            "samples": [list(s) for s in self.samples],
        }


def richardson_table(values: Sequence[float], levels: int = RICHARDSON_LEVELS) -> List[List[float]]:
    """Iterated Richardson extrapolation for step ratio 2 and integer powers"""
    table = [list(values)]
    for m in range(1, levels + 1):
        mult = 2.0**m
        previous = table[-1]
        if len(previous) < 2:
            break
        table.append([(mult * high - low) / (mult - 1.0) for low, high in zip(previous, previous[1:])])
    return table[1:]


def aitken(values: Sequence[float]) -> List[float]:
    """Aitken delta-squared transform; terms with a vanishing denominator are skipped"""
    out = []
    for a, b, c in zip(values, values[1:], values[2:]):
        denominator = (c - b) - (b - a)
        if denominator == 0.0:
            if c == b:
                out.append(c)
            continue
        out.append(c - (c - b) ** 2 / denominator)
    return out


def _spread(sequence: Sequence[float]) -> float:
    tail = sequence[-3:]
    return max(tail) - min(tail)


def boundary_limit(
    functional: Callable,
    endpoint: int,
    tol: Optional[float] = None,
    k_min: Optional[int] = None,
    k_max: Optional[int] = None,
    label: str = "",
) -> BoundaryLimit:
    """
    Limit of functional(x) as x -> endpoint.

    The functional is sampled at distances 2^-k, k = k_min..k_max, stopping
    at the first point where it cannot be evaluated. Candidates are the raw
    sequence, iterated Richardson extrapolants and the Aitken transform;
    extrapolants are only used once the raw differences contract. The
    candidate whose last three values agree best wins, and the limit is
    converged when that spread is within tol * max(1, |estimate|).

    Raises:
        ExtrapolationError: if the functional cannot be evaluated at all
    """
    endpoint = parse_endpoint(endpoint)
    tol = tol if tol is not None else config.get("limits.tol", 1.0e-9)
    k_min = k_min if k_min is not None else config.get("limits.k_min", 4)
    k_max = k_max if k_max is not None else config.get("limits.k_max", 40)

    samples: List[Tuple[float, float]] = []
    for k in range(k_min, k_max + 1):
        distance = 2.0**-k
        x = endpoint * (1.0 - distance)
        try:
            value = float(functional(x))
        except (EvaluationError, QuadratureError, ZeroDivisionError, OverflowError) as e:
            logger.debug(f"Ladder for {label or 'functional'} stopped at k={k}: {e}")
            break
        if not np.isfinite(value):
            break
        samples.append((distance, value))

    if not samples:
        raise ExtrapolationError(f"Could not evaluate {label or 'functional'} near {endpoint:+d}")

    values = [v for _, v in samples]
    if len(values) < 3:
        return BoundaryLimit(
            estimate=values[-1],
            error_estimate=float("inf"),
            converged=False,
            samples=tuple(samples),
            endpoint=endpoint,
            label=label,
        )

    candidates = [("raw", values)]
    differences = np.abs(np.diff(values[-4:]))
    contracting = all(
        b <= CONTRACTION_RATIO * a or b == 0.0 for a, b in zip(differences, differences[1:])
    )
    if contracting:
        for level, row in enumerate(richardson_table(values), start=1):
            candidates.append((f"richardson-{level}", row))
        candidates.append(("aitken", aitken(values)))

    best_name, best = candidates[0]
    best_spread = _spread(best)
    for name, sequence in candidates[1:]:
        if len(sequence) < 3:
            continue
        spread = _spread(sequence)
        if spread < best_spread:
            best_name, best, best_spread = name, sequence, spread

    estimate = best[-1]
    converged = best_spread <= tol * max(1.0, abs(estimate))
    if not converged:
        logger.debug(
            f"Limit of {label or 'functional'} at {endpoint:+d} not converged "
            f"(spread {best_spread:.3e}, method {best_name})"
        )
    return BoundaryLimit(
        estimate=estimate,
        error_estimate=best_spread,
        converged=converged,
        samples=tuple(samples),
        endpoint=endpoint,
        label=label,
        method=best_name,
    )


def expr_limit(e: "E.Expr", endpoint: int, label: str = "", **kwargs) -> BoundaryLimit:
    """boundary_limit of an expression's values"""
    return boundary_limit(lambda x: E.evaluate(e, x), endpoint, label=label or E.to_text(e), **kwargs)


FORM_KINDS = ("form1", "form2", "bracket_one", "bracket_x", "b1", "b2")


def form_limit(kind: str, f: FunctionLike, g: Optional[FunctionLike], endpoint: int, **kwargs) -> BoundaryLimit:
    """
    Endpoint limit of a form or functional.

    BC functions are replaced by their closed-form germ at the endpoint and
    the form is built symbolically, so exact cancellations survive.
    """
    endpoint = parse_endpoint(endpoint)
    fe = as_function(f).germ(endpoint).expr
    ge = as_function(g).germ(endpoint).expr if g is not None else None

    builders = {
        "form1": lambda: form1_expr(fe, ge),
        "form2": lambda: form2_expr(fe, ge),
        "bracket_one": lambda: bracket_one_expr(fe),
        "bracket_x": lambda: bracket_x_expr(fe),
        "b1": lambda: b1_expr(fe),
        "b2": lambda: b2_expr(fe),
    }
    if kind not in builders:
        raise ValueError(f"Unknown form {kind!r}; expected one of {FORM_KINDS}")

    symbolic = builders[kind]()
    names = as_function(f).label + (f", {as_function(g).label}" if g is not None else "")
    return expr_limit(symbolic, endpoint, label=f"{kind}[{names}]", **kwargs)


@dataclass(frozen=True)
class BracketDifference:
    """[f,g]_2(1) - [f,g]_2(-1) with both endpoint limits"""

    value: float
    upper: BoundaryLimit
    lower: BoundaryLimit

    @property
    def converged(self) -> bool:
        return self.upper.converged and self.lower.converged

    @property
    def error_estimate(self) -> float:
        return self.upper.error_estimate + self.lower.error_estimate

    def is_zero(self, abs_tol: Optional[float] = None) -> bool:
        abs_tol = abs_tol if abs_tol is not None else config.get("limits.zero_abs_tol", 1.0e-7)
        return self.converged and abs(self.value) <= max(abs_tol, 10.0 * self.error_estimate)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "converged": self.converged,
            "error": self.error_estimate,
            "upper": self.upper.to_dict(),
            "lower": self.lower.to_dict(),
        }


def bracket_difference(f: FunctionLike, g: FunctionLike, order: int = 2, **kwargs) -> BracketDifference:
    kind = "form2" if order == 2 else "form1"
    upper = form_limit(kind, f, g, 1, **kwargs)
    lower = form_limit(kind, f, g, -1, **kwargs)
    return BracketDifference(value=upper.estimate - lower.estimate, upper=upper, lower=lower)


def gkn_bracket_difference(f: FunctionLike, bc: BCFunction, **kwargs) -> BracketDifference:
    """[f, bc]_2(1) - [f, bc]_2(-1)"""
    return bracket_difference(f, bc, order=2, **kwargs)


def gkn_conditions(f: FunctionLike, delta: Optional[float] = None) -> Dict[str, BracketDifference]:
    """The four GKN differences [f, f_j]_2 |_{-1}^{1}"""
    return {
        tag: gkn_bracket_difference(f, BCFunction(tag, delta))
        for tag in ("f1", "f2", "f3", "f4")
    }


def gkn_independence_matrix(delta: Optional[float] = None) -> np.ndarray:
    """4x4 matrix of [f_i, g_j]_2 |_{-1}^{1}; nonsingular iff f1..f4 are independent modulo the minimal domain"""
    rows = []
    for i in range(1, 5):
        fi = BCFunction(f"f{i}", delta)
        rows.append(
            [bracket_difference(fi, BCFunction(f"g{j}", delta)).value for j in range(1, 5)]
        )
    return np.array(rows)


# Green's formula


def _image(op, f: SmoothFunction) -> Callable:
    from .operators import apply_numeric, apply_symbolic

    if isinstance(f, ExprFunction):
        image = apply_symbolic(op, f.expr)
        return lambda x: E.evaluate(image, x)
    return lambda x: apply_numeric(op, f.derivatives(x, op.order), x)


@dataclass(frozen=True)
class GreenReport:
    integral: float
    boundary: float
    residual: float
    quadrature_error: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "integral": self.integral,
            "boundary": self.boundary,
            "residual": self.residual,
            "quadrature_error": self.quadrature_error,
            "converged": self.converged,
        }


def green_check(op, f: FunctionLike, g: FunctionLike, alpha: float, beta: float, tol: Optional[float] = None) -> GreenReport:
    """
    Both sides of Green's formula on [alpha, beta]:
    int (op[f] g - f op[g]) against [f,g](beta) - [f,g](alpha), with
    [.,.]_1 for second-order operators and [.,.]_2 for fourth-order ones.
    """
    from .operators import StructuredOperator, expand

    if isinstance(op, StructuredOperator):
        op = expand(op)
    if not -1.0 < alpha < beta < 1.0:
        raise ValueError(f"Green's formula needs -1 < alpha < beta < 1, got [{alpha}, {beta}]")
    if op.order not in (2, 4):
        raise ValueError(f"No boundary form for operators of order {op.order}")

    f = as_function(f)
    g = as_function(g)
    lf = _image(op, f)
    lg = _image(op, g)

    def integrand(x):
        return lf(x) * g.derivatives(x, 0)[0] - f.derivatives(x, 0)[0] * lg(x)

    estimate = integrate(integrand, alpha, beta, tol=tol)
    form = form1 if op.order == 2 else form2
    boundary = float(form(f, g, beta) - form(f, g, alpha))
    return GreenReport(
        integral=estimate.value,
        boundary=boundary,
        residual=abs(estimate.value - boundary),
        quadrature_error=estimate.error_estimate,
        converged=estimate.converged,
    )


def green_residual(op, f: FunctionLike, g: FunctionLike, alpha: float, beta: float) -> float:
    """|int_alpha^beta (op[f] g - f op[g]) - [f,g]|_alpha^beta|"""
    return green_check(op, f, g, alpha, beta).residual

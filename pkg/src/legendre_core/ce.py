"""
Legendre Lab Core Library - Chisholm-Everitt Module

The functional K(x), its supremum K and the integral operators

    (Af)(x) = phi(x) int_x^b psi f w,    (Bf)(x) = psi(x) int_a^x phi f w

with numerical checks of the bounds ||Af||, ||Bf|| <= 2K ||f|| on a mesh
that is uniform in the interior and geometrically graded toward both ends.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import config
from .polynomial import legendre_polynomial
from .quadrature import gauss_legendre_rule, integrate, integrate_graded
from .utils import get_logger, BoundViolation, CEConfigurationError, LegendreError
from . import expr as E

logger = get_logger("ce")

MESH_DEPTH = 40
CELL_NODES = 20
GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)

Integrand = Union["E.Expr", str, Callable]


@dataclass(frozen=True)
class CEProblem:
    """Interval (a, b), weight w, functions phi and psi, split point c"""

    name: str
    a: float
    b: float
    phi: "E.Expr"
    psi: "E.Expr"
    weight: "E.Expr" = E.ONE
    split: Optional[float] = None

    def __post_init__(self):
        if not self.b > self.a:
            raise CEConfigurationError(f"{self.name}: interval needs a < b, got ({self.a}, {self.b})")
        if not self.a < self.c < self.b:
            raise CEConfigurationError(f"{self.name}: split point {self.c} lies outside ({self.a}, {self.b})")

    @classmethod
    def from_texts(
        cls, name: str, a, b, phi: str, psi: str, weight: str = "1", split: Optional[float] = None
    ) -> "CEProblem":
        return cls(name, float(a), float(b), E.parse(phi), E.parse(psi), E.parse(weight), split)

    @property
    def c(self) -> float:
        return self.split if self.split is not None else 0.5 * (self.a + self.b)

    def phi_squared(self, x):
        return _values(self.phi, x) ** 2 * _values(self.weight, x)

    def psi_squared(self, x):
        return _values(self.psi, x) ** 2 * _values(self.weight, x)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "interval": [self.a, self.b],
            "phi": str(self.phi),
            "psi": str(self.psi),
            "weight": str(self.weight),
            "split": self.c,
        }


# (a, b, phi, psi); mirrors swap phi and psi under x -> -x
PRESETS: Dict[str, Tuple[str, str, str, str]] = {
    "ce-p1": ("0", "1", "1/(1-x^2)", "1"),
    "ce-p2": ("0", "1", "1/(1-x^2)^2", "1-x^2"),
    "ce-p1-mirror": ("-1", "0", "1", "1/(1-x^2)"),
    "ce-p2-mirror": ("-1", "0", "1-x^2", "1/(1-x^2)^2"),
    "ce-unit": ("0", "1", "1", "1"),
}


def preset(name: str) -> CEProblem:
    if name not in PRESETS:
        raise CEConfigurationError(f"Unknown preset {name!r}; available: {', '.join(PRESETS)}")
    a, b, phi, psi = PRESETS[name]
    return CEProblem.from_texts(name, a, b, phi, psi)


def _values(f: Integrand, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if isinstance(f, str):
        f = E.parse(f)
    if isinstance(f, E.Expr):
        value = E.evaluate(f, x)
    else:
        value = f(x)
    return np.broadcast_to(np.asarray(value, dtype=float), x.shape)


def _label(f: Integrand, index: int) -> str:
    if isinstance(f, (str, E.Expr)):
        return str(f)
    return getattr(f, "label", None) or f"f{index}"


class CEMesh:
    """
    Mesh points in (a, b) with a Gauss rule on every cell.

    Points are uniform in the interior and geometric toward both ends down
    to distance (b - a) 2^-40.
    """

    def __init__(self, a: float, b: float, points: Optional[int] = None):
        points = points or config.get("ce.grid_points", 400)
        width = b - a
        uniform = np.linspace(a, b, points + 2)[1:-1]
        k = np.arange(int(np.ceil(np.log2(points + 1))) + 1, MESH_DEPTH + 1)
        self.a, self.b = a, b
        self.points = np.unique(np.concatenate([a + width * 2.0 ** (-k), uniform, b - width * 2.0 ** (-k)]))

        self.rule = gauss_legendre_rule(CELL_NODES)
        self.coarse = gauss_legendre_rule(CELL_NODES // 2)
        self.lo, self.hi = self.points[:-1], self.points[1:]
        half = 0.5 * (self.hi - self.lo)
        mid = 0.5 * (self.hi + self.lo)
        self.nodes = mid[:, None] + half[:, None] * self.rule.nodes[None, :]
        self.weights = half[:, None] * self.rule.weights[None, :]
        self._coarse_nodes = mid[:, None] + half[:, None] * self.coarse.nodes[None, :]
        self._coarse_weights = half[:, None] * self.coarse.weights[None, :]

    @property
    def cells(self) -> int:
        return self.lo.size

    def cell_integrals(self, g: Callable) -> np.ndarray:
        """Integral of g over every cell; cells where the two rules disagree are redone adaptively"""
        tol = config.get("quadrature.tol", 1.0e-10)
        fine = np.sum(self.weights * _values(g, self.nodes), axis=1)
        coarse = np.sum(self._coarse_weights * _values(g, self._coarse_nodes), axis=1)
        for i in np.flatnonzero(np.abs(fine - coarse) > tol + 1.0e-10 * np.abs(fine)):
            fine[i] = integrate(g, self.lo[i], self.hi[i], tol=tol, rel_tol=1.0e-12).value
        return fine

    def tail(self, g: Callable, side: int, what: str) -> float:
        """Integral of g from the outermost point to a (side -1) or b (side +1)"""
        anchor, endpoint = (self.points[0], self.a) if side == -1 else (self.points[-1], self.b)
        estimate = integrate_graded(g, anchor, endpoint, rel_tol=1.0e-10)
        if estimate.divergent or not estimate.converged:
            raise CEConfigurationError(f"Integral of {what} toward x = {endpoint} does not converge")
        return estimate.value if side == 1 else -estimate.value

    def from_left(self, g: Callable, what: str = "integrand") -> np.ndarray:
        """int_a^p g at every mesh point p"""
        head = self.tail(g, -1, what)
        return head + np.concatenate([[0.0], np.cumsum(self.cell_integrals(g))])

    def from_right(self, g: Callable, what: str = "integrand") -> np.ndarray:
        """int_p^b g at every mesh point p"""
        end = self.tail(g, 1, what)
        cells = self.cell_integrals(g)
        return end + np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])

    def locate(self, x: float) -> int:
        """Index j with points[j] <= x < points[j+1], clipped to the mesh"""
        j = int(np.searchsorted(self.points, x, side="right")) - 1
        return min(max(j, 0), self.points.size - 1)

    def inner_nodes(self, toward: str) -> Tuple[np.ndarray, np.ndarray]:
        """
        Gauss nodes and weights on [node, cell end] (toward 'right') or
        [cell start, node] (toward 'left') for every cell node.

        Returns:
            tuple: arrays of shape (cells, m, m)
        """
        if toward == "right":
            lo, hi = self.nodes, np.broadcast_to(self.hi[:, None], self.nodes.shape)
        else:
            lo, hi = np.broadcast_to(self.lo[:, None], self.nodes.shape), self.nodes
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = mid[..., None] + half[..., None] * self.rule.nodes
        weights = half[..., None] * self.rule.weights
        return nodes, weights


def _piece(g: Callable, lo: float, hi: float) -> float:
    """Signed integral of g from lo to hi"""
    if lo == hi:
        return 0.0
    sign = 1.0 if hi > lo else -1.0
    lo, hi = min(lo, hi), max(lo, hi)
    return sign * integrate(g, lo, hi, tol=config.get("quadrature.tol", 1.0e-10), rel_tol=1.0e-12).value


def _check_point(problem: CEProblem, x: float):
    if not problem.a < x < problem.b:
        raise ValueError(f"x = {x} lies outside ({problem.a}, {problem.b})")


def check_configuration(problem: CEProblem, mesh: Optional[CEMesh] = None) -> CEMesh:
    """
    Validate phi in L^2((a, c]; w), psi in L^2([c, b); w) and the positivity
    condition on sampled sub-intervals.

    Raises:
        CEConfigurationError: on divergence or a vanishing sub-interval integral
    """
    c = problem.c
    for g, endpoint, what in ((problem.phi_squared, problem.a, "phi^2 w"), (problem.psi_squared, problem.b, "psi^2 w")):
        try:
            estimate = integrate_graded(g, c, endpoint, rel_tol=1.0e-10)
        except LegendreError as e:
            raise CEConfigurationError(f"{problem.name}: cannot integrate {what}: {e}")
        if estimate.divergent or not estimate.converged:
            raise CEConfigurationError(
                f"{problem.name}: {what} is not integrable between the split point {c} and {endpoint}"
            )

    mesh = mesh or CEMesh(problem.a, problem.b)
    samples = config.get("ce.positivity_samples", 16)
    blocks = np.array_split(np.arange(mesh.cells), samples)
    for g, what in ((problem.phi_squared, "phi^2 w"), (problem.psi_squared, "psi^2 w")):
        cells = mesh.cell_integrals(g)
        for block in blocks:
            if block.size and not np.sum(cells[block]) > 0.0:
                lo, hi = mesh.lo[block[0]], mesh.hi[block[-1]]
                raise CEConfigurationError(f"{problem.name}: integral of {what} vanishes on [{lo:.6g}, {hi:.6g}]")
    return mesh


class KFunction:
    """K(x) = (int_a^x phi^2 w)^(1/2) (int_x^b psi^2 w)^(1/2) with cached cumulative integrals"""

    def __init__(self, problem: CEProblem, mesh: Optional[CEMesh] = None):
        self.problem = problem
        self.mesh = check_configuration(problem, mesh)
        self.left = self.mesh.from_left(problem.phi_squared, "phi^2 w")
        self.right = self.mesh.from_right(problem.psi_squared, "psi^2 w")

    def mesh_values(self) -> np.ndarray:
        return np.sqrt(self.left * self.right)

    def factors(self, x: float) -> Tuple[float, float]:
        """(int_a^x phi^2 w, int_x^b psi^2 w)"""
        _check_point(self.problem, x)
        p, mesh = self.problem, self.mesh
        if x < mesh.points[0]:
            left = -integrate_graded(p.phi_squared, x, p.a, rel_tol=1.0e-10).value
            right = self.right[0] + _piece(p.psi_squared, x, mesh.points[0])
            return left, right
        j = mesh.locate(x)
        left = self.left[j] + _piece(p.phi_squared, mesh.points[j], x)
        if x > mesh.points[-1]:
            right = integrate_graded(p.psi_squared, x, p.b, rel_tol=1.0e-10).value
        else:
            right = self.right[j] - _piece(p.psi_squared, mesh.points[j], x)
        return left, right

    def __call__(self, x: float) -> float:
        left, right = self.factors(x)
        return float(np.sqrt(max(left, 0.0) * max(right, 0.0)))


def K_of_x(problem: CEProblem, x: float) -> float:
    """K at one point; builds its own cumulative integrals"""
    _check_point(problem, x)
    return KFunction(problem)(x)


@dataclass
class KSupResult:
    value: float
    argmax: float
    unbounded: bool
    at_endpoint: bool = False
    grid_max: float = 0.0

    def to_dict(self) -> dict:
        return {
            "K_sup": self.value,
            "argmax": self.argmax,
            "unbounded": self.unbounded,
            "at_endpoint": self.at_endpoint,
            "grid_max": self.grid_max,
        }


def _growing(values: np.ndarray, rungs: int = 6) -> bool:
    """Strict growth by more than 0.1% over the last rungs toward an endpoint"""
    tail = values[-rungs:]
    return tail.size == rungs and bool(np.all(tail[1:] > tail[:-1] * (1.0 + 1.0e-3)))


def K_sup(problem: CEProblem, k: Optional[KFunction] = None) -> KSupResult:
    """
    Supremum of K over (a, b).

    The mesh maximum is refined by golden-section search on its two
    neighbouring cells. A maximum on the graded ends that keeps growing
    toward the endpoint flags K as unbounded.
    """
    k = k or KFunction(problem)
    values = k.mesh_values()
    points = k.mesh.points
    i = int(np.argmax(values))
    grid_max = float(values[i])

    graded = MESH_DEPTH // 2
    if (i >= points.size - graded and _growing(values)) or (i < graded and _growing(values[::-1])):
        logger.warning(f"{problem.name}: K grows without saturation toward an endpoint")
        return KSupResult(value=float("inf"), argmax=float(points[i]), unbounded=True, at_endpoint=True, grid_max=grid_max)

    if i == 0 or i == points.size - 1:
        return KSupResult(value=grid_max, argmax=float(points[i]), unbounded=False, at_endpoint=True, grid_max=grid_max)

    lo, hi = float(points[i - 1]), float(points[i + 1])
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = k(x1), k(x2)
    while hi - lo > 1.0e-10 * max(1.0, abs(lo)):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = k(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = k(x1)

    best_x, best = (x1, f1) if f1 >= f2 else (x2, f2)
    if best < grid_max:
        best_x, best = float(points[i]), grid_max
    logger.info(f"{problem.name}: K_sup = {best:.10g} at x = {best_x:.8g}")
    return KSupResult(value=best, argmax=best_x, unbounded=False, grid_max=grid_max)


class OperatorImage:
    """
    Af or Bf as an evaluable function.

    Cumulative integrals of psi f w (for A) or phi f w (for B) are cached on
    the mesh; evaluation adds one adaptive piece per point.
    """

    def __init__(self, kind: str, problem: CEProblem, f: Integrand, mesh: Optional[CEMesh] = None):
        if kind not in ("A", "B"):
            raise ValueError("kind must be 'A' or 'B'")
        self.kind = kind
        self.problem = problem
        self.f = E.parse(f) if isinstance(f, str) else f
        self.mesh = mesh or CEMesh(problem.a, problem.b)
        inner, self.outer = (problem.psi, problem.phi) if kind == "A" else (problem.phi, problem.psi)

        def integrand(x):
            return _values(inner, x) * _values(self.f, x) * _values(problem.weight, x)

        self.integrand = integrand
        if kind == "A":
            self.cumulative = self.mesh.from_right(integrand, "psi f w")
        else:
            self.cumulative = self.mesh.from_left(integrand, "phi f w")

    def _integral(self, x: float) -> float:
        mesh = self.mesh
        if self.kind == "A":
            if x > mesh.points[-1]:
                return integrate_graded(self.integrand, x, self.problem.b, rel_tol=1.0e-10).value
            j = mesh.locate(x)
            if x < mesh.points[0]:
                return self.cumulative[0] + _piece(self.integrand, x, mesh.points[0])
            return self.cumulative[j] - _piece(self.integrand, mesh.points[j], x)
        if x < mesh.points[0]:
            return -integrate_graded(self.integrand, x, self.problem.a, rel_tol=1.0e-10).value
        j = mesh.locate(x)
        return self.cumulative[j] + _piece(self.integrand, mesh.points[j], x)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        for value in flat:
            _check_point(self.problem, float(value))
        integrals = np.array([self._integral(float(value)) for value in flat]).reshape(x.shape)
        result = _values(self.outer, x) * integrals
        return float(result) if x.ndim == 0 else result

    def mesh_values(self) -> np.ndarray:
        """Values at every cell's Gauss nodes, shape (cells, m)"""
        mesh = self.mesh
        if self.kind == "A":
            nodes, weights = mesh.inner_nodes("right")
            partial = np.sum(weights * _values(self.integrand, nodes), axis=2)
            integrals = self.cumulative[1:, None] + partial
        else:
            nodes, weights = mesh.inner_nodes("left")
            partial = np.sum(weights * _values(self.integrand, nodes), axis=2)
            integrals = self.cumulative[:-1, None] + partial
        return _values(self.outer, mesh.nodes) * integrals

    def norm(self) -> float:
        weight = _values(self.problem.weight, self.mesh.nodes)
        return float(np.sqrt(np.sum(self.mesh.weights * weight * self.mesh_values() ** 2)))


def apply_A(problem: CEProblem, f: Integrand, mesh: Optional[CEMesh] = None) -> OperatorImage:
    """x -> phi(x) int_x^b psi f w"""
    return OperatorImage("A", problem, f, mesh)


def apply_B(problem: CEProblem, f: Integrand, mesh: Optional[CEMesh] = None) -> OperatorImage:
    """x -> psi(x) int_a^x phi f w"""
    return OperatorImage("B", problem, f, mesh)


def weighted_norm(problem: CEProblem, f: Integrand, mesh: CEMesh) -> float:
    values = _values(f, mesh.nodes)
    weight = _values(problem.weight, mesh.nodes)
    return float(np.sqrt(np.sum(mesh.weights * weight * values**2)))


@dataclass
class RatioRecord:
    label: str
    norm_f: float
    norm_Af: float
    norm_Bf: float

    @property
    def ratio_A(self) -> float:
        return self.norm_Af / self.norm_f if self.norm_f > 0 else 0.0

    @property
    def ratio_B(self) -> float:
        return self.norm_Bf / self.norm_f if self.norm_f > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "f": self.label,
            "norm_f": self.norm_f,
            "norm_Af": self.norm_Af,
            "norm_Bf": self.norm_Bf,
            "ratio_A": self.ratio_A,
            "ratio_B": self.ratio_B,
        }


@dataclass
class CEBoundReport:
    problem: CEProblem
    k_sup: KSupResult
    records: List[RatioRecord] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def bound(self) -> float:
        return 2.0 * self.k_sup.value

    @property
    def max_ratio(self) -> float:
        return max((max(r.ratio_A, r.ratio_B) for r in self.records), default=0.0)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "K": self.k_sup.to_dict(),
            "bound": self.bound,
            "max_ratio": self.max_ratio,
            "ratios": [r.to_dict() for r in self.records],
            "violations": list(self.violations),
        }


def _ratio_record(problem: CEProblem, f: Integrand, label: str, mesh: CEMesh) -> RatioRecord:
    norm_f = weighted_norm(problem, f, mesh)
    if norm_f == 0.0:
        return RatioRecord(label, 0.0, 0.0, 0.0)
    return RatioRecord(
        label=label,
        norm_f=norm_f,
        norm_Af=apply_A(problem, f, mesh).norm(),
        norm_Bf=apply_B(problem, f, mesh).norm(),
    )


def verify_bound(
    problem: CEProblem, corpus: Sequence[Integrand], jobs: Optional[int] = None, strict: bool = True
) -> CEBoundReport:
    """
    Ratios ||Af||/||f|| and ||Bf||/||f|| for every corpus member against 2K.

    Raises:
        CEConfigurationError: if K is unbounded
        BoundViolation: if a ratio exceeds 2K(1 + slack) and strict is set
    """
    jobs = jobs or config.get("classifier.jobs", 1)
    slack = config.get("ce.bound_slack", 1.0e-6)
    k = KFunction(problem)
    k_sup = K_sup(problem, k)
    if k_sup.unbounded:
        raise CEConfigurationError(f"{problem.name}: K is unbounded, no norm bound applies")

    items = [(f, _label(f, i)) for i, f in enumerate(corpus)]

    def run(item) -> RatioRecord:
        return _ratio_record(problem, item[0], item[1], k.mesh)

    if jobs <= 1:
        records = [run(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, items))

    report = CEBoundReport(problem=problem, k_sup=k_sup, records=records)
    limit = report.bound * (1.0 + slack)
    for r in records:
        for name, ratio in (("A", r.ratio_A), ("B", r.ratio_B)):
            if ratio > limit:
                report.violations.append(f"||{name}f||/||f|| = {ratio:.10g} > 2K = {report.bound:.10g} for f = {r.label}")

    if report.violations:
        for v in report.violations:
            logger.error(f"{problem.name}: {v}")
        if strict:
            raise BoundViolation(f"{problem.name}: {len(report.violations)} ratio(s) exceed 2K", report)
    logger.info(f"{problem.name}: max ratio {report.max_ratio:.6g} against 2K = {report.bound:.6g}")
    return report


def default_corpus(problem: CEProblem, size: Optional[int] = None, seed: Optional[int] = None) -> List["E.Expr"]:
    """Seeded random integer polynomials plus l^2[P_n] for n <= 6"""
    from .operators import apply_symbolic, legendre_power

    size = size or config.get("ce.corpus_size", 20)
    seed = seed if seed is not None else config.get("output.seed", 20240601)
    rng = np.random.default_rng(seed)
    corpus: List[E.Expr] = []
    for _ in range(size):
        degree = int(rng.integers(0, 7))
        coeffs = [Fraction(int(c)) for c in rng.integers(-5, 6, size=degree + 1)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = Fraction(1)
        corpus.append(E.poly_expr(coeffs))
    square = legendre_power(2)
    for n in range(7):
        corpus.append(apply_symbolic(square, E.poly_expr(legendre_polynomial(n))))
    return corpus


class _Window:
    """Mollified indicator of [lo, hi] with transition width s"""

    def __init__(self, lo: float, hi: float, s: float):
        self.lo, self.hi, self.s = lo, hi, s
        self.label = f"window[{lo:.4g}, {hi:.4g}; {s:.2g}]"

    def __call__(self, x):
        return 0.5 * (np.tanh((x - self.lo) / self.s) - np.tanh((x - self.hi) / self.s))


@dataclass
class SharpnessReport:
    bound: float
    max_ratio: float
    best: str

    @property
    def fraction_of_bound(self) -> float:
        return self.max_ratio / self.bound if self.bound > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "max_ratio": self.max_ratio,
            "fraction_of_bound": self.fraction_of_bound,
            "best": self.best,
        }


def sharpness_probe(problem: CEProblem, widths: Sequence[float] = (0.05, 0.02, 0.005)) -> SharpnessReport:
    """
    Largest ratio over mollified indicators of (a, x*), (x*, b) and windows
    around the K argmax x*. A lower estimate of the operator norms, reported
    against the 2K bound.
    """
    report = verify_bound(problem, [], strict=False)
    x_star = report.k_sup.argmax
    a, b = problem.a, problem.b
    length = b - a
    candidates: List[_Window] = []
    for s in widths:
        w = s * length
        candidates.append(_Window(a - length, x_star, w))
        candidates.append(_Window(x_star, b + length, w))
        for half in (0.1, 0.25):
            lo, hi = max(a, x_star - half * length), min(b, x_star + half * length)
            candidates.append(_Window(lo, hi, w))

    mesh = CEMesh(a, b)
    best, best_label = 0.0, ""
    for window in candidates:
        record = _ratio_record(problem, window, window.label, mesh)
        ratio = max(record.ratio_A, record.ratio_B)
        if ratio > best:
            best, best_label = ratio, window.label
    return SharpnessReport(bound=report.bound, max_ratio=best, best=best_label)

"""
Legendre Lab Core Library - Domain Classifier Module

Numerical membership tests for the maximal domains of l and l^2, the domain
of A, the equivalent descriptions of the domain of A^2, the conditions of
the Everitt-Littlejohn-Marić theorem, and the power domains B_n and D_n.
Every verdict carries the evidence it was decided on.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import config
from .polynomial import ONE_MINUS_X2
from .quadrature import IntegralEstimate, integrate_graded
from .utils import get_logger, LegendreError
from .forms import (
    BoundaryLimit,
    b1_expr,
    b2_expr,
    bracket_one_expr,
    bracket_x_expr,
    expr_limit,
)
from . import expr as E

logger = get_logger("classify")

ENDPOINTS = (1, -1)


class Verdict(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non-member"
    INCONCLUSIVE = "inconclusive"


def combine(verdicts: Sequence[Verdict]) -> Verdict:
    """Conjunction: any non-member decides, otherwise any inconclusive"""
    if Verdict.NON_MEMBER in verdicts:
        return Verdict.NON_MEMBER
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.MEMBER


def agree(verdicts: Sequence[Verdict]) -> bool:
    """True when the conclusive verdicts are all equal"""
    conclusive = {v for v in verdicts if v != Verdict.INCONCLUSIVE}
    return len(conclusive) <= 1


# Corpus used by the equivalence harnesses
CORPUS: Tuple[str, ...] = (
    "1",
    "x",
    "x^3",
    "35/8*x^4 - 15/4*x^2 + 3/8",
    "x^7 - 2*x^2 + 1",
    "(1-x)*(1+x)",
    "(1-x)^(-1/4)",
    "(1+x)^(-1/4)",
    "(1-x)^(1/4)",
    "(1+x)^(1/4)",
    "(1-x)^(3/4)",
    "(1+x)^(3/4)",
    "(1-x)^(3/2)",
    "(1+x)^(3/2)",
    "(1-x)^(5/2)",
    "(1+x)^(5/2)",
    "x*(1-x)^(3/2)",
    "ln(1-x)",
    "ln(1+x)",
    "(1-x)*ln(1-x)",
    "(1+x)*ln(1+x)",
    "x^2*ln(1-x)",
    "(1-x)^2*ln(1-x)",
    "(1+x)^2*ln(1+x)",
    "x*ln(1+x)",
)


def _ladder_points(endpoint: int, rungs: int) -> np.ndarray:
    k_max = config.get("limits.k_max", 40)
    ks = np.arange(k_max - rungs + 1, k_max + 1)
    return ks, endpoint * (1.0 - 2.0 ** (-ks.astype(float)))


# Integrability


@dataclass
class IntegrabilityEvidence:
    """L^p evidence for one function: endpoint exponents and shell sums"""

    label: str
    power: int
    slopes: Dict[int, float] = field(default_factory=dict)
    integrals: Dict[int, IntegralEstimate] = field(default_factory=dict)
    verdict: Verdict = Verdict.INCONCLUSIVE
    reason: str = ""

    @property
    def member(self) -> bool:
        return self.verdict == Verdict.MEMBER

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "power": self.power,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "slopes": {f"{e:+d}": s for e, s in self.slopes.items()},
            "integrals": {f"{e:+d}": est.to_dict() for e, est in self.integrals.items()},
        }


def endpoint_slope(h: Callable, endpoint: int, rungs: Optional[int] = None) -> float:
    """
    Exponent s in |h| ~ d^s, d the distance to the endpoint, by a log-log
    least-squares fit over the deepest ladder rungs. Identically zero data
    gives +inf.
    """
    rungs = rungs or config.get("classifier.slope_rungs", 12)
    ks, points = _ladder_points(endpoint, rungs)
    values = np.abs(np.asarray(h(points), dtype=float))
    mask = np.isfinite(values) & (values > 0.0)
    if not np.any(mask):
        return float("inf")
    if np.count_nonzero(mask) < 2:
        return 0.0
    log_distance = -ks[mask] * np.log(2.0)
    slope, _ = np.polyfit(log_distance, np.log(values[mask]), 1)
    return float(slope)


def integrability(h: "E.Expr", power: int = 2, label: str = "", guard: Optional[float] = None) -> IntegrabilityEvidence:
    """
    Decide h in L^power(-1, 1).

    At each endpoint the fitted exponent s and the graded shell sum of |h|^p
    are combined: member when p*s > -1 + guard and the sum converged,
    non-member when p*s < -1 - guard, or when the sum diverged and
    p*s < -1 + guard; anything else is inconclusive.
    """
    guard = guard if guard is not None else config.get("classifier.guard", 0.1)
    label = label or E.to_text(h)
    evidence = IntegrabilityEvidence(label=label, power=power)

    def values(x):
        return E.evaluate(h, x)

    def integrand(x):
        return np.abs(E.evaluate(h, x)) ** power

    side_verdicts = []
    reasons = []
    for endpoint in ENDPOINTS:
        try:
            slope = endpoint_slope(values, endpoint)
            estimate = integrate_graded(integrand, 0.0, float(endpoint), rel_tol=1.0e-9)
        except LegendreError as e:
            evidence.reason = f"{label}: evaluation failed near {endpoint:+d}: {e}"
            evidence.verdict = Verdict.INCONCLUSIVE
            return evidence

        evidence.slopes[endpoint] = slope
        evidence.integrals[endpoint] = estimate
        exponent = power * slope
        if exponent > -1.0 + guard and estimate.converged:
            side_verdicts.append(Verdict.MEMBER)
        elif exponent < -1.0 - guard or (estimate.divergent and exponent < -1.0 + guard):
            side_verdicts.append(Verdict.NON_MEMBER)
            reasons.append(f"{label} not in L^{power} near {endpoint:+d} (p*s = {exponent:.3f})")
        else:
            side_verdicts.append(Verdict.INCONCLUSIVE)
            reasons.append(f"{label} undecided near {endpoint:+d} (p*s = {exponent:.3f})")

    evidence.verdict = combine(side_verdicts)
    evidence.reason = "; ".join(reasons)
    return evidence


# Boundedness


@dataclass
class BoundednessEvidence:
    values: Dict[int, List[float]] = field(default_factory=dict)
    verdict: Verdict = Verdict.INCONCLUSIVE
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "values": {f"{e:+d}": v for e, v in self.values.items()},
        }


def boundedness(f: "E.Expr", label: str = "f") -> BoundednessEvidence:
    """Bounded when |f| grows by less than growth_factor over the last rungs"""
    factor = config.get("classifier.growth_factor", 1.05)
    rungs = config.get("classifier.growth_rungs", 8)
    evidence = BoundednessEvidence()
    verdicts = []
    for endpoint in ENDPOINTS:
        _, points = _ladder_points(endpoint, rungs)
        try:
            magnitudes = np.abs(np.asarray(E.evaluate(f, points), dtype=float))
        except LegendreError as e:
            evidence.reason = f"evaluation failed near {endpoint:+d}: {e}"
            return evidence
        evidence.values[endpoint] = [float(v) for v in magnitudes]
        if not np.all(np.isfinite(magnitudes)):
            verdicts.append(Verdict.NON_MEMBER)
            evidence.reason = f"{label} not finite near {endpoint:+d}"
        elif magnitudes.max() <= factor * magnitudes[0] + 1.0e-12:
            verdicts.append(Verdict.MEMBER)
        else:
            verdicts.append(Verdict.NON_MEMBER)
            evidence.reason = f"{label} grows near {endpoint:+d}"
    evidence.verdict = combine(verdicts)
    return evidence


# Probes


def _q_power(k: Fraction) -> "E.Expr":
    """(1 - x^2)^k as a product of affine powers"""
    return E.mul(E.affine_power(1, -1, k), E.affine_power(1, 1, k))


class Probes:
    """Symbolic derived functions of f, built once and shared by every test"""

    def __init__(self, f: "E.Expr"):
        from .operators import apply_symbolic, expand, legendre_power

        self.f = E.normalize(f)
        ladder = E.derivative_ladder(self.f, 4)
        self.d = ladder
        self.ell = expand(legendre_power(1))
        self.ell2 = expand(legendre_power(2))
        self.lf = apply_symbolic(self.ell, self.f)
        self.l2f = apply_symbolic(self.ell2, self.f)
        self.lpf = E.differentiate(self.lf)
        self.sqrt_q_f1 = E.normalize(E.mul(_q_power(Fraction(1, 2)), ladder[1]))
        self.q_f2 = E.normalize(E.mul(E.poly_expr(ONE_MINUS_X2), ladder[2]))
        self.p_f2 = E.normalize(E.mul(E.poly_expr(ONE_MINUS_X2**2), ladder[2]))
        self.p_f4 = E.normalize(E.mul(E.poly_expr(ONE_MINUS_X2**2), ladder[4]))
        self.q_f = E.normalize(E.mul(E.poly_expr(ONE_MINUS_X2), self.f))
        self.b1 = b1_expr(self.f)
        self.b2 = b2_expr(self.f)
        self.b2_over_q = E.normalize(E.div(self.b2, E.poly_expr(ONE_MINUS_X2)))
        self.bracket_one = bracket_one_expr(self.f)
        self.bracket_x = bracket_x_expr(self.f)
        self.b1_lf = b1_expr(self.lf)

        # keyed by display label
        self.evidence: Dict[str, IntegrabilityEvidence] = {}
        self.limit_records: Dict[str, Dict[int, BoundaryLimit]] = {}

    def _integrable(self, h: "E.Expr", label: str, power: int) -> IntegrabilityEvidence:
        key = label if power == 2 else f"{label} (L^{power})"
        if key not in self.evidence:
            self.evidence[key] = integrability(h, power, label=label)
        return self.evidence[key]

    def integrable(self, name: str, power: int = 2) -> IntegrabilityEvidence:
        return self._integrable(getattr(self, name), PROBE_LABELS[name], power)

    def derivative_integrable(self, k: int, power: int = 2) -> IntegrabilityEvidence:
        return self._integrable(self.d[k], "f" + "'" * k, power)

    def limits(self, name: str) -> Dict[int, BoundaryLimit]:
        label = PROBE_LABELS[name]
        if label not in self.limit_records:
            out = {}
            for endpoint in ENDPOINTS:
                try:
                    out[endpoint] = expr_limit(getattr(self, name), endpoint, label=label)
                except LegendreError as e:
                    logger.warning(f"Limit of {label} at {endpoint:+d} failed: {e}")
                    out[endpoint] = BoundaryLimit(
                        estimate=float("nan"),
                        error_estimate=float("inf"),
                        converged=False,
                        samples=(),
                        endpoint=endpoint,
                        label=label,
                    )
            self.limit_records[label] = out
        return self.limit_records[label]


PROBE_LABELS = {
    "f": "f",
    "lf": "l[f]",
    "l2f": "l^2[f]",
    "lpf": "l'[f]",
    "sqrt_q_f1": "(1-x^2)^(1/2) f'",
    "q_f2": "(1-x^2) f''",
    "p_f2": "(1-x^2)^2 f''",
    "p_f4": "(1-x^2)^2 f''''",
    "q_f": "(1-x^2) f",
    "b1": "B1",
    "b2": "B2",
    "b2_over_q": "(1-x^2)^-1 ((1-x^2)^2 f'')'",
    "bracket_one": "[f,1]_2",
    "bracket_x": "[f,x]_2",
    "b1_lf": "(1-x^2) l[f]'",
}


def _limits_zero(probes: Probes, names: Sequence[str]) -> Tuple[Verdict, str]:
    """Member when every named limit is converged and zero at both ends"""
    verdicts = []
    reasons = []
    for name in names:
        for endpoint, limit in probes.limits(name).items():
            if not limit.converged:
                verdicts.append(Verdict.INCONCLUSIVE)
                reasons.append(f"{PROBE_LABELS[name]} limit at {endpoint:+d} not converged")
            elif limit.is_zero():
                verdicts.append(Verdict.MEMBER)
            else:
                verdicts.append(Verdict.NON_MEMBER)
                reasons.append(f"{PROBE_LABELS[name]} -> {limit.estimate:.6g} at {endpoint:+d}")
    return combine(verdicts), "; ".join(reasons)


def _all_integrable(probes: Probes, names: Sequence[str], power: int = 2) -> Tuple[Verdict, str]:
    evidence = [probes.integrable(name, power) for name in names]
    reasons = [e.reason for e in evidence if e.verdict != Verdict.MEMBER and e.reason]
    return combine([e.verdict for e in evidence]), "; ".join(reasons)


# Reports


@dataclass
class ElmReport:
    """Conditions of the Everitt-Littlejohn-Marić theorem for f in the maximal domain of l"""

    applicable: bool
    conditions: Dict[str, Verdict] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)
    agreement: bool = True

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "agreement": self.agreement,
            "conditions": {k: v.value for k, v in self.conditions.items()},
            "notes": dict(self.notes),
        }


ELM_AGREEMENT_KEYS = ("i", "ii", "iv", "vi", "vii")


@dataclass
class ClassificationReport:
    expression: str
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    reasons: Dict[str, str] = field(default_factory=dict)
    integrability: Dict[str, IntegrabilityEvidence] = field(default_factory=dict)
    limits: Dict[str, Dict[int, BoundaryLimit]] = field(default_factory=dict)
    boundedness: Optional[BoundednessEvidence] = None
    elm: Optional[ElmReport] = None
    smoothness: Dict[str, Verdict] = field(default_factory=dict)
    smoothness_ok: bool = True
    agreement: bool = True

    def verdict(self, domain: str) -> Verdict:
        return self.verdicts[domain]

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "reasons": {k: v for k, v in self.reasons.items() if v},
            "agreement": self.agreement,
            "integrability": {k: e.to_dict() for k, e in self.integrability.items()},
            "limits": {
                name: {f"{e:+d}": lim.to_dict() for e, lim in per_end.items()}
                for name, per_end in self.limits.items()
            },
            "boundedness": self.boundedness.to_dict() if self.boundedness else None,
            "elm": self.elm.to_dict() if self.elm else None,
            "smoothness": {k: v.value for k, v in self.smoothness.items()},
            "smoothness_ok": self.smoothness_ok,
        }


DOMAINS = ("Delta1max", "D(A)", "Delta2max", "D(A^2)", "B", "D(S)", "D")
A2_CHARACTERIZATIONS = ("D(A^2)", "B", "D(S)", "D")


def classify(f: "E.Expr", text: Optional[str] = None) -> ClassificationReport:
    """
    Classify f against every domain.

    Verdict keys: Delta1max, D(A), Delta2max, and the four descriptions of
    the domain of A^2: D(A^2) (f in D(A) with l[f] in D(A)), B (left-definite
    integrability), D(S) (bracket limits) and D (B1, B2 limits).
    """
    text = text or E.to_text(f)
    logger.info(f"Classifying {text}")
    probes = Probes(f)
    report = ClassificationReport(expression=text)
    _classify_first_order(probes, report)

    def record(domain: str, verdict: Verdict, reason: str = ""):
        report.verdicts[domain] = verdict
        report.reasons[domain] = reason

    # Maximal domain of l^2
    v, why = _all_integrable(probes, ("f", "l2f"))
    record("Delta2max", v, why)
    delta2 = report.verdicts["Delta2max"]

    # D(A^2) algebraically: f in D(A), l[f] in D(A)
    lf_v, lf_why = _all_integrable(probes, ("lf", "l2f"))
    b1lf_v, b1lf_why = _limits_zero(probes, ("b1_lf",))
    record(
        "D(A^2)",
        combine([report.verdicts["D(A)"], lf_v, b1lf_v]),
        _join(report.reasons["D(A)"], lf_why, b1lf_why),
    )

    # Left-definite description
    v, why = _all_integrable(probes, ("f", "p_f4"))
    record("B", v, why)

    # Bracket limits
    v, why = _limits_zero(probes, ("bracket_one", "bracket_x"))
    record("D(S)", combine([delta2, v]), _join(report.reasons["Delta2max"], why))

    # B1 and B2 limits
    v, why = _limits_zero(probes, ("b1", "b2"))
    record("D", combine([delta2, v]), _join(report.reasons["Delta2max"], why))

    report.agreement = agree([report.verdicts[d] for d in A2_CHARACTERIZATIONS])
    if not report.agreement:
        logger.error(
            f"Characterizations of D(A^2) disagree for {text}: "
            + ", ".join(f"{d}={report.verdicts[d].value}" for d in A2_CHARACTERIZATIONS)
        )

    report.boundedness = boundedness(probes.f)
    report.elm = _elm(probes, report)
    _smoothness(probes, report)

    report.integrability = dict(probes.evidence)
    report.limits = dict(probes.limit_records)
    return report


def _join(*parts: str) -> str:
    return "; ".join(p for p in parts if p)


def _classify_first_order(probes: Probes, report: ClassificationReport):
    """Delta1max and D(A) verdicts"""
    # Maximal domain of l
    v, why = _all_integrable(probes, ("f", "lf"))
    report.verdicts["Delta1max"] = v
    report.reasons["Delta1max"] = why

    # D(A): B1 vanishes at both ends
    b1_verdict, b1_why = _limits_zero(probes, ("b1",))
    report.verdicts["D(A)"] = combine([v, b1_verdict])
    report.reasons["D(A)"] = _join(why, b1_why)


def _elm(probes: Probes, report: ClassificationReport) -> ElmReport:
    if report.verdicts["Delta1max"] != Verdict.MEMBER:
        return ElmReport(applicable=False)

    elm = ElmReport(applicable=True)
    elm.conditions["i"] = report.verdicts["D(A)"]
    elm.conditions["ii"] = probes.derivative_integrable(1, 2).verdict
    elm.conditions["iii"] = probes.derivative_integrable(1, 1).verdict
    elm.conditions["iv"] = report.boundedness.verdict
    elm.conditions["v"] = elm.conditions["ii"]
    elm.notes["v"] = "absolute continuity on [-1, 1] is implied by (ii)"
    elm.conditions["vi"] = probes.integrable("sqrt_q_f1").verdict
    elm.conditions["vii"] = probes.integrable("q_f2").verdict
    elm.agreement = agree([elm.conditions[k] for k in ELM_AGREEMENT_KEYS])
    if not elm.agreement:
        logger.error(
            f"ELM conditions disagree for {report.expression}: "
            + ", ".join(f"({k})={elm.conditions[k].value}" for k in ELM_AGREEMENT_KEYS)
        )
    return elm


def _smoothness(probes: Probes, report: ClassificationReport):
    """Smoothness consequences that every member of D(A^2) must show"""
    if report.verdicts["D(S)"] != Verdict.MEMBER:
        return
    checks = report.smoothness
    checks["f'' in L2"] = probes.derivative_integrable(2, 2).verdict
    checks["l'[f] in L2"] = probes.integrable("lpf").verdict
    checks["(1-x^2)^-1 ((1-x^2)^2 f'')' in L2"] = probes.integrable("b2_over_q").verdict
    checks["(1-x^2)^2 f'' -> 0"] = _limits_zero(probes, ("p_f2",))[0]
    checks["(1-x^2) f -> 0"] = _limits_zero(probes, ("q_f",))[0]
    lf_limits = probes.limits("lf")
    checks["l[f] has finite limits"] = (
        Verdict.MEMBER if all(lim.converged for lim in lf_limits.values()) else Verdict.INCONCLUSIVE
    )
    report.smoothness_ok = Verdict.NON_MEMBER not in checks.values()
    if not report.smoothness_ok:
        logger.error(f"Member {report.expression} of D(A^2) fails a smoothness check: {checks}")


def elm_consistency(f: "E.Expr") -> ElmReport:
    """
    ELM agreement report; not applicable outside the maximal domain of l.

    Only the first-order verdicts and the probes the ELM conditions read
    are computed.
    """
    probes = Probes(f)
    report = ClassificationReport(expression=E.to_text(f))
    _classify_first_order(probes, report)
    if report.verdicts["Delta1max"] != Verdict.MEMBER:
        return ElmReport(applicable=False)
    report.boundedness = boundedness(probes.f)
    return _elm(probes, report)


def classify_corpus(expressions: Sequence[str], jobs: Optional[int] = None) -> List[ClassificationReport]:
    """Classify each expression; output order follows input order"""
    jobs = jobs or config.get("classifier.jobs", 1)

    def run(text: str) -> ClassificationReport:
        return classify(E.parse(text), text=text)

    if jobs <= 1:
        return [run(text) for text in expressions]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, expressions))


def read_corpus(path: str) -> List[str]:
    """One expression per line; blank lines and '#' comments are skipped"""
    entries = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.split("#", 1)[0].strip()
            if line:
                entries.append(line)
    return entries


# Power domains


@dataclass
class PowerReport:
    expression: str
    n: int
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    reasons: Dict[str, str] = field(default_factory=dict)
    derivative_check: Optional[Verdict] = None
    agreement: bool = True

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "n": self.n,
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "reasons": {k: v for k, v in self.reasons.items() if v},
            "derivative_check": self.derivative_check.value if self.derivative_check else None,
            "agreement": self.agreement,
        }


MAX_POWER = 4


def classify_power(f: "E.Expr", n: int, text: Optional[str] = None) -> PowerReport:
    """
    B_n = {f in L^2 : (1-x^2)^n f^(2n) in L^2} against
    D_n = {f, l^n[f] in L^2 : ((1-x^2)^j f^(j))^(j-1) -> 0 at +-1, j = 1..n}.
    Members of B_n are also checked for f^(n) in L^2.
    """
    from .operators import apply_symbolic, legendre_power

    if not 1 <= n <= MAX_POWER:
        raise ValueError(f"Power domains are available for 1 <= n <= {MAX_POWER}")

    text = text or E.to_text(f)
    f = E.normalize(f)
    ladder = E.derivative_ladder(f, 2 * n)
    report = PowerReport(expression=text, n=n)

    f_ev = integrability(f, 2, label="f")
    weighted = E.normalize(E.mul(E.poly_expr(ONE_MINUS_X2**n), ladder[2 * n]))
    b_ev = integrability(weighted, 2, label=f"(1-x^2)^{n} f^({2 * n})")
    report.verdicts["B"] = combine([f_ev.verdict, b_ev.verdict])
    report.reasons["B"] = _join(f_ev.reason, b_ev.reason)

    image = apply_symbolic(legendre_power(n), f)
    image_ev = integrability(image, 2, label=f"l^{n}[f]")
    verdicts = [f_ev.verdict, image_ev.verdict]
    reasons = [f_ev.reason, image_ev.reason]
    for j in range(1, n + 1):
        functional = E.mul(E.poly_expr(ONE_MINUS_X2**j), ladder[j])
        for _ in range(j - 1):
            functional = E.differentiate(functional)
        functional = E.normalize(functional)
        label = f"((1-x^2)^{j} f^({j}))^({j - 1})"
        for endpoint in ENDPOINTS:
            try:
                limit = expr_limit(functional, endpoint, label=label)
            except LegendreError as e:
                verdicts.append(Verdict.INCONCLUSIVE)
                reasons.append(f"{label} at {endpoint:+d}: {e}")
                continue
            if not limit.converged:
                verdicts.append(Verdict.INCONCLUSIVE)
                reasons.append(f"{label} limit at {endpoint:+d} not converged")
            elif limit.is_zero():
                verdicts.append(Verdict.MEMBER)
            else:
                verdicts.append(Verdict.NON_MEMBER)
                reasons.append(f"{label} -> {limit.estimate:.6g} at {endpoint:+d}")
    report.verdicts["D"] = combine(verdicts)
    report.reasons["D"] = _join(*reasons)
    report.agreement = agree([report.verdicts["B"], report.verdicts["D"]])

    if report.verdicts["B"] == Verdict.MEMBER:
        report.derivative_check = integrability(ladder[n], 2, label=f"f^({n})").verdict
    return report

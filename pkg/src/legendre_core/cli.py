"""
Legendre Lab Core Library - Command Line Module

Argument parsing, run configuration and report output for every subcommand.
Exit codes: 0 on success, 1 when a check or verdict fails, 2 on usage or
configuration errors.
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .config import config
from .utils import (
    get_logger,
    set_log_level,
    format_fraction,
    parse_endpoint,
    ConfigError,
    LegendreError,
    ParseError,
)
from . import expr as E

logger = get_logger("cli")

FORMATS = ("json", "csv", "pretty")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Tolerances and knobs shared by every subcommand"""

    quad_tol: float
    limit_tol: float
    guard: float
    depth: int
    delta: float
    format: str
    seed: int
    jobs: int

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if args.config:
            config.merge_file(args.config)

        def pick(value, key):
            return value if value is not None else config.get(key)

        run = cls(
            quad_tol=float(pick(args.tol, "quadrature.tol")),
            limit_tol=float(pick(args.limit_tol, "limits.tol")),
            guard=float(pick(args.guard, "classifier.guard")),
            depth=int(pick(args.depth, "limits.k_max")),
            delta=float(pick(args.delta, "bc.plateau_width")),
            format=str(pick(args.format, "output.format")),
            seed=int(pick(args.seed, "output.seed")),
            jobs=int(pick(args.jobs, "classifier.jobs")),
        )
        run.validate()
        return run

    def validate(self):
        for name in ("quad_tol", "limit_tol", "guard"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.delta < 0.5:
            raise ConfigError(f"Plateau width delta must lie in (0, 0.5), got {self.delta}")
        if self.depth <= config.get("limits.k_min", 4) + 2:
            raise ConfigError(f"Ladder depth {self.depth} is too shallow")
        if self.format not in FORMATS:
            raise ConfigError(f"Unknown format {self.format!r}; expected one of {FORMATS}")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")

    def apply(self):
        """Push the run settings into the global configuration"""
        config.set("quadrature.tol", self.quad_tol)
        config.set("limits.tol", self.limit_tol)
        config.set("classifier.guard", self.guard)
        config.set("limits.k_max", self.depth)
        config.set("bc.plateau_width", self.delta)
        config.set("output.seed", self.seed)
        config.set("classifier.jobs", self.jobs)


@dataclass
class Output:
    """A subcommand result in all three renderings"""

    data: Any
    lines: List[str] = field(default_factory=list)
    rows: Optional[List[List[Any]]] = None
    ok: bool = True


def emit(output: Output, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(output.data, sort_keys=True, indent=2) + "\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        for row in output.rows or _flatten(output.data):
            writer.writerow(row)
    else:
        for line in output.lines:
            stream.write(line + "\n")


def _flatten(data: Any, prefix: str = "") -> List[List[Any]]:
    """key,value rows for results without a natural table"""
    rows = []
    if isinstance(data, dict):
        for key in sorted(data):
            rows.extend(_flatten(data[key], f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(data, list):
        for i, item in enumerate(data):
            rows.extend(_flatten(item, f"{prefix}[{i}]"))
    else:
        rows.append([prefix, data])
    return rows


# Subcommands


def cmd_stirling(args, run: RunConfig) -> Output:
    from .operators import legendre_stirling_triangle, stirling_mismatches

    if args.n < 1:
        raise ConfigError("stirling needs --n >= 1")
    triangle = legendre_stirling_triangle(args.n)
    data: Dict[str, Any] = {"rows": triangle}
    lines = [f"n={n}: " + " ".join(str(v) for v in row) for n, row in enumerate(triangle, start=1)]
    ok = True
    if args.check:
        mismatches = stirling_mismatches(args.n)
        ok = not mismatches
        data["check"] = {"ok": ok, "mismatches": [list(m) for m in mismatches]}
        lines.append("check: recurrence and summation formula agree" if ok else f"check FAILED: {mismatches}")
    rows = [["n", "j", "value"]] + [[n, j, v] for n, row in enumerate(triangle, start=1) for j, v in enumerate(row, start=1)]
    return Output(data=data, lines=lines, rows=rows, ok=ok)


def cmd_operator(args, run: RunConfig) -> Output:
    from .operators import (
        DEFICIENCY_INDICES,
        composition_mismatches,
        expand,
        indicial_roots,
        legendre_power,
    )

    if args.n < 1:
        raise ConfigError("operator needs --n >= 1")
    op = legendre_power(args.n)
    data: Dict[str, Any] = {"label": op.label, "order": op.order}
    data.update(op.to_json())
    lines = [f"{op.label}: order {op.order}"]
    lines += [f"  s_{j} = {format_fraction(s)}" for j, s in op.terms]
    if args.n in DEFICIENCY_INDICES:
        data["deficiency_indices"] = list(DEFICIENCY_INDICES[args.n])
        lines.append(f"  deficiency indices {DEFICIENCY_INDICES[args.n]}")

    ok = True
    if args.expand:
        expanded = expand(op)
        data.update(expanded.to_json())
        lines += ["  " + line for line in expanded.describe()]
    if args.indicial:
        roots = {f"{e:+d}": [format_fraction(r) for r in indicial_roots(op, e)] for e in (1, -1)}
        data["indicial_roots"] = roots
        lines += [f"  indicial roots at {e}: {', '.join(r)}" for e, r in roots.items()]
    if args.compose_check:
        failures = composition_mismatches(args.n)
        ok = not failures
        data["compose_check"] = {"ok": ok, "failures": failures}
        lines.append(
            f"  composition check up to n={args.n}: " + ("ok" if ok else f"FAILED at {failures}")
        )
    return Output(data=data, lines=lines, ok=ok)


def cmd_classify(args, run: RunConfig) -> Output:
    from .classify import classify_corpus, classify_power, read_corpus, DOMAINS

    if bool(args.expr) == bool(args.corpus):
        raise ConfigError("classify needs exactly one of --expr or --corpus")
    expressions = [args.expr] if args.expr else read_corpus(args.corpus)
    for text in expressions:
        E.parse(text)

    if args.power:
        reports = [classify_power(E.parse(text), args.power, text=text) for text in expressions]
        ok = all(r.agreement for r in reports)
        lines = [
            f"{r.expression}: B_{r.n}={r.verdicts['B'].value} D_{r.n}={r.verdicts['D'].value}"
            + ("" if r.agreement else "  DISAGREE")
            for r in reports
        ]
        rows = [["expression", "n", "B", "D", "agreement"]]
        rows += [[r.expression, r.n, r.verdicts["B"].value, r.verdicts["D"].value, r.agreement] for r in reports]
        return Output(data=[r.to_dict() for r in reports], lines=lines, rows=rows, ok=ok)

    reports = classify_corpus(expressions, jobs=run.jobs)
    ok = all(
        r.agreement and r.smoothness_ok and (r.elm is None or r.elm.agreement) for r in reports
    )
    lines = []
    for r in reports:
        lines.append(r.expression)
        for domain in DOMAINS:
            reason = r.reasons.get(domain)
            lines.append(f"  {domain:10s} {r.verdicts[domain].value}" + (f"  ({reason})" if reason else ""))
        if r.elm and r.elm.applicable:
            lines.append("  ELM        " + " ".join(f"({k})={v.value}" for k, v in r.elm.conditions.items()))
        if not r.agreement:
            lines.append("  characterizations of D(A^2) DISAGREE")
    rows = [["expression"] + list(DOMAINS) + ["agreement"]]
    rows += [[r.expression] + [r.verdicts[d].value for d in DOMAINS] + [r.agreement] for r in reports]
    data = reports[0].to_dict() if args.expr else [r.to_dict() for r in reports]
    return Output(data=data, lines=lines, rows=rows, ok=ok)


def cmd_forms(args, run: RunConfig) -> Output:
    from .forms import form1, form2, form_limit

    f, g = E.parse(args.f), E.parse(args.g)
    kind = "form2" if args.order == 2 else "form1"
    if args.limit is not None:
        endpoint = parse_endpoint(args.limit)
        limit = form_limit(kind, f, g, endpoint)
        data = {"order": args.order, "f": args.f, "g": args.g}
        data.update(limit.to_dict())
        status = "converged" if limit.converged else "NOT converged"
        lines = [f"[f,g]_{args.order} -> {limit.estimate:.12g} at x = {endpoint:+d} ({status}, error {limit.error_estimate:.2e})"]
        return Output(data=data, lines=lines, ok=limit.converged)

    x = args.at if args.at is not None else 0.0
    if not -1.0 < x < 1.0:
        raise ConfigError(f"--at must lie in (-1, 1), got {x}")
    value = float((form2 if args.order == 2 else form1)(f, g, x))
    data = {"order": args.order, "f": args.f, "g": args.g, "x": x, "value": value}
    return Output(data=data, lines=[f"[f,g]_{args.order}({x}) = {value:.15g}"])


def cmd_green(args, run: RunConfig) -> Output:
    from .forms import green_check
    from .operators import expand, legendre_power

    if args.n not in (1, 2):
        raise ConfigError("green needs --n 1 or 2")
    if not -1.0 < args.alpha < args.beta < 1.0:
        raise ConfigError(f"green needs -1 < alpha < beta < 1, got [{args.alpha}, {args.beta}]")
    report = green_check(expand(legendre_power(args.n)), E.parse(args.f), E.parse(args.g), args.alpha, args.beta)
    threshold = max(1.0e-8, 10.0 * report.quadrature_error)
    ok = report.converged and report.residual <= threshold
    data = {"f": args.f, "g": args.g, "alpha": args.alpha, "beta": args.beta, "n": args.n}
    data.update(report.to_dict())
    lines = [
        f"integral  {report.integral:.15g}",
        f"boundary  {report.boundary:.15g}",
        f"residual  {report.residual:.3e}" + ("" if ok else "  FAILED"),
    ]
    return Output(data=data, lines=lines, ok=ok)


def cmd_spectrum(args, run: RunConfig) -> Output:
    from .spectral import spectrum

    result = spectrum(args.op, args.basis, args.N)
    lines = [f"{result.op} in the {result.basis} basis, N={result.n}"]
    lines += [
        f"  {i:3d}  {value:22.12f}  target {target:.0f}  error {error:.2e}"
        for i, value, target, error in zip(range(result.n), result.eigenvalues, result.targets, result.errors)
    ]
    return Output(data=result.to_dict(), lines=lines, rows=result.csv_rows())


def cmd_ce(args, run: RunConfig) -> Output:
    from .ce import default_corpus, preset, sharpness_probe, verify_bound
    from .classify import read_corpus

    problem = preset(args.preset)
    corpus = [E.parse(text) for text in read_corpus(args.corpus)] if args.corpus else default_corpus(problem, seed=run.seed)
    report = verify_bound(problem, corpus, jobs=run.jobs, strict=False)
    data = report.to_dict()
    lines = [
        f"{problem.name}: K = {report.k_sup.value:.12g} at x = {report.k_sup.argmax:.8g}",
        f"  bound 2K = {report.bound:.12g}, max ratio {report.max_ratio:.12g} over {len(report.records)} functions",
    ]
    if args.sharpness:
        probe = sharpness_probe(problem)
        data["sharpness"] = probe.to_dict()
        lines.append(f"  sharpness probe: {probe.max_ratio:.6g} = {probe.fraction_of_bound:.3f} of 2K")
    lines += [f"  VIOLATION {v}" for v in report.violations]
    rows = [["f", "norm_f", "ratio_A", "ratio_B"]]
    rows += [[r.label, r.norm_f, r.ratio_A, r.ratio_B] for r in report.records]
    return Output(data=data, lines=lines, rows=rows, ok=not report.violations)


def cmd_gkn(args, run: RunConfig) -> Output:
    import numpy as np

    from .forms import gkn_conditions, gkn_independence_matrix

    f = E.parse(args.f)
    conditions = gkn_conditions(f, run.delta)
    matrix = gkn_independence_matrix(run.delta)
    determinant = float(np.linalg.det(matrix))
    data = {
        "f": args.f,
        "delta": run.delta,
        "conditions": {tag: d.to_dict() for tag, d in conditions.items()},
        "satisfied": {tag: d.is_zero() for tag, d in conditions.items()},
        "independence_matrix": matrix.tolist(),
        "determinant": determinant,
    }
    lines = [f"[{args.f}, {tag}]_2 |_-1^1 = {d.value:.10g}" + ("  (zero)" if d.is_zero() else "") for tag, d in conditions.items()]
    lines.append("independence matrix [f_i, g_j]_2 |_-1^1:")
    lines += ["  " + "  ".join(f"{v:10.6f}" for v in row) for row in matrix]
    lines.append(f"  determinant {determinant:.6g}")
    return Output(data=data, lines=lines, ok=abs(determinant) > 1.0e-6)


COMMANDS = {
    "stirling": cmd_stirling,
    "operator": cmd_operator,
    "classify": cmd_classify,
    "forms": cmd_forms,
    "green": cmd_green,
    "spectrum": cmd_spectrum,
    "ce": cmd_ce,
    "gkn": cmd_gkn,
}


def build_parser() -> argparse.ArgumentParser:
    from .ce import PRESETS

    parser = argparse.ArgumentParser(
        prog="legendre-lab",
        description="Legendre operator powers, boundary forms, domains, spectra and CE bounds",
    )
    parser.add_argument("--format", choices=FORMATS, help="Output format (config output.format)")
    parser.add_argument("--config", help="YAML or JSON file merged over the defaults")
    parser.add_argument("--tol", type=float, help="Quadrature tolerance")
    parser.add_argument("--limit-tol", type=float, help="Endpoint limit tolerance")
    parser.add_argument("--guard", type=float, help="Integrability guard band")
    parser.add_argument("--depth", type=int, help="Deepest ladder rung k_max")
    parser.add_argument("--delta", type=float, help="Plateau width of the BC functions")
    parser.add_argument("--seed", type=int, help="Seed for randomized corpora")
    parser.add_argument("--jobs", type=int, help="Worker threads for corpus runs")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", help="Legendre-Stirling triangle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", action="store_true", help="Compare recurrence and summation formula")

    p = sub.add_parser("operator", help="Structured and expanded forms of l^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expand", action="store_true")
    p.add_argument("--compose-check", action="store_true")
    p.add_argument("--indicial", action="store_true")

    p = sub.add_parser("classify", help="Domain membership of a function")
    p.add_argument("--expr")
    p.add_argument("--corpus", help="File with one expression per line")
    p.add_argument("--power", type=int, help="Decide B_n and D_n instead, n <= 4")

    p = sub.add_parser("forms", help="Sesquilinear forms at a point or endpoint")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--order", type=int, choices=(1, 2), default=2)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--at", type=float)
    where.add_argument("--limit")

    p = sub.add_parser("green", help="Green's formula residual on [alpha, beta]")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, choices=(1, 2), default=2)

    p = sub.add_parser("spectrum", help="Galerkin eigenvalues of A or A^2")
    p.add_argument("--op", choices=("A", "A2"), required=True)
    p.add_argument("--basis", choices=("legendre", "monomial"), default="legendre")
    p.add_argument("--N", type=int, default=12)

    p = sub.add_parser("ce", help="Chisholm-Everitt bounds for a preset")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True)
    p.add_argument("--corpus", help="File with one expression per line")
    p.add_argument("--sharpness", action="store_true", help="Probe how close 2K is to attained")

    p = sub.add_parser("gkn", help="GKN differences and the independence matrix")
    p.add_argument("--f", required=True)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        set_log_level("DEBUG" if args.verbose > 1 else "INFO")

    try:
        run = RunConfig.from_args(args)
        run.apply()
        logger.info(f"Running {args.command}")
        output = COMMANDS[args.command](args, run)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n{e.caret()}\n")
        return EXIT_USAGE
    except ConfigError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"file error: {e}\n")
        return EXIT_USAGE
    except LegendreError as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILED

    emit(output, run.format)
    return EXIT_OK if output.ok else EXIT_FAILED

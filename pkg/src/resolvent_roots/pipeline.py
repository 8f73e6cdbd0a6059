"""End-to-end solve: parse, normalize, build the resolvent, expand, evaluate, check."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .algebra import format_rational, parse_rational
from .errors import (
    DegenerateInputError,
    InputError,
    MultipleSeedRootError,
    OracleError,
    SingularIndexError,
)
from .oracle import aberth_roots, match_roots
from .resolvent import root_polynomial, shift_homogenize, solve_resolvent
from .series import (
    DEFAULT_TERMS,
    branch_seeds,
    evaluate_branch,
    expand_branch,
    extract_recurrence,
    normalize_coefficients,
    rescale,
    SeriesBranch,
)

__all__ = ["RunConfig", "RunReport", "parse_polynomial", "run_pipeline"]

MATCH_TOL = 1e-6

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2
EXIT_DIVERGED = 3


def parse_polynomial(text: str):
    """Descending exact coefficients ``[a_n, ..., a_1, a_0]`` from whitespace-separated tokens."""
    tokens = text.replace(",", " ").split()
    coeffs = []
    for pos, tok in enumerate(tokens, start=1):
        try:
            coeffs.append(parse_rational(tok))
        except ValueError:
            raise InputError(f"malformed token {tok!r} at position {pos}") from None
    if not coeffs:
        raise InputError("no coefficients given")
    if coeffs[0] == 0:
        raise InputError("leading coefficient zero at position 1")
    if len(coeffs) - 1 < 2:
        raise InputError(f"degree must be at least 2 (got {len(coeffs) - 1} from {len(coeffs)} coefficients)")
    return coeffs


@dataclass
class RunConfig:
    coefficients: list
    terms: int = DEFAULT_TERMS
    scale: object = "auto"
    normalize: bool = True
    oracle_check: bool = True
    json_path: str | None = None
    csv_path: str | None = None
    emit_ode: bool = False

    def __post_init__(self):
        self.coefficients = [Fraction(c) for c in self.coefficients]
        if len(self.coefficients) < 3:
            raise InputError("degree must be at least 2")
        if self.coefficients[0] == 0:
            raise InputError("leading coefficient zero")
        if self.terms < self.degree:
            raise InputError(f"terms ({self.terms}) must be at least the degree ({self.degree})")
        if self.scale != "auto" and not float(self.scale) > 0:
            raise InputError("scale must be 'auto' or a positive number")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass
class RunReport:
    config: RunConfig
    factor: Fraction = Fraction(1)
    poly: object = None
    a0: Fraction = Fraction(0)
    resolvent: object = None
    recurrence: object = None
    branches: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    oracle_roots: list | None = None
    match: object = None
    diagnostics: list = field(default_factory=list)
    exit_status: int = EXIT_OK
    timings: dict = field(default_factory=dict)


class _Timer:
    def __init__(self, timings, name):
        self.timings, self.name = timings, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.timings[self.name] = time.perf_counter() - self.t0


def _choose_scale(cfg, radius):
    if cfg.scale != "auto":
        return float(cfg.scale)
    if radius > 0 and math.isfinite(radius):
        return min(radius, 1.0)
    return 1.0


def run_pipeline(cfg: RunConfig) -> RunReport:
    report = RunReport(config=cfg)
    coeffs = cfg.coefficients
    p = root_polynomial(coeffs[:-1])
    a0 = coeffs[-1]
    if cfg.normalize:
        p, a0, report.factor = normalize_coefficients(p, a0)
    report.poly, report.a0 = p, a0

    try:
        with _Timer(report.timings, "seeds"):
            seeds = branch_seeds(p)
        with _Timer(report.timings, "resolvent"):
            report.resolvent = shift_homogenize(solve_resolvent(p), p)
        with _Timer(report.timings, "recurrence"):
            report.recurrence = extract_recurrence(report.resolvent)
    except DegenerateInputError as exc:
        report.diagnostics.append(f"{type(exc).__name__}: {exc}")
        report.exit_status = EXIT_DEGENERATE
        return report

    degenerate = False
    with _Timer(report.timings, "series"):
        for k, seed in enumerate(seeds):
            try:
                branch = expand_branch(
                    p, report.recurrence, report.resolvent.shift, seed,
                    K=cfg.terms, branch_id=k, exact=False,
                )
            except SingularIndexError as exc:
                report.diagnostics.append(f"branch {k}: {exc}")
                report.branches.append(_failed_branch(p, k, seed, report, "singular_index"))
                degenerate = True
                continue
            except MultipleSeedRootError as exc:
                report.diagnostics.append(f"branch {k}: {exc}")
                report.branches.append(_failed_branch(p, k, seed, report, "seed_failed"))
                degenerate = True
                continue
            branch = rescale(branch, _choose_scale(cfg, branch.radius_estimate))
            est = evaluate_branch(branch, a0)
            if est.status != "converged":
                branch = replace(branch, status=est.status)
                report.diagnostics.append(
                    f"branch {k}: diverged at s = {format_rational(a0)} "
                    f"(radius estimate {branch.radius_estimate:.6g})"
                )
            report.branches.append(branch)
            report.estimates.append(est)

    ok = all(b.status == "converged" for b in report.branches)

    if cfg.oracle_check:
        with _Timer(report.timings, "oracle"):
            ok = _oracle_check(report) and ok

    if degenerate:
        report.exit_status = EXIT_DEGENERATE
    elif not ok:
        report.exit_status = EXIT_DIVERGED
    return report


def _failed_branch(p, k, seed, report, status):
    return SeriesBranch(
        branch_id=k, seed=seed, seeds=(seed,), coefficients=(), shift=report.resolvent.shift,
        poly=p, radius_estimate=0.0, status=status,
    )


def _oracle_check(report) -> bool:
    target = tuple(complex(c(report.a0)) for c in reversed(report.poly.coeffs))
    try:
        roots = aberth_roots(target)
    except OracleError as exc:
        report.diagnostics.append(f"oracle: {exc}")
        return False
    report.oracle_roots = [r.value for r in roots]
    converged = [e for e in report.estimates if e.status == "converged"]
    match = match_roots(converged, roots)
    report.match = match
    dist = {converged[i].branch_id: d for i, _, d in match.pairs}
    report.estimates = [
        replace(e, oracle_distance=dist.get(e.branch_id)) for e in report.estimates
    ]
    ok = True
    if match.max_distance > MATCH_TOL:
        report.diagnostics.append(
            f"oracle: max match distance {match.max_distance:.3e} exceeds {MATCH_TOL:g}"
        )
        ok = False
    if match.unmatched_oracle:
        report.diagnostics.append(
            f"oracle: {len(match.unmatched_oracle)} root(s) not reached by the series"
        )
        ok = False
    return ok

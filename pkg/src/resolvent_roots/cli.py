"""Command-line front end.

Usage::

    resolvent-roots solve --coeffs "1 0 1 1/10"
    resolvent-roots solve --coeffs "1 0 1 1/10" --json out.json --emit-coeffs b.csv --emit-ode

Exit codes: 0 all branches converged (and matched the oracle), 1 input
error, 2 degenerate or singular input, 3 at least one branch diverged.
"""

from __future__ import annotations

import csv
import json
import math
import sys

import click

from .algebra import format_rational, parse_rational
from .errors import InputError
from .pipeline import EXIT_INPUT, RunConfig, RunReport, parse_polynomial, run_pipeline

__all__ = ["main", "report_to_json", "dumps_json", "write_coefficients_csv", "emit_outputs"]


def _num(x):
    """JSON-ready float; non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cplx(z):
    if z is None:
        return None
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def report_to_json(report: RunReport) -> dict:
    cfg = report.config
    estimates = {e.branch_id: e for e in report.estimates}
    branches = []
    for b in report.branches:
        est = estimates.get(b.branch_id)
        branches.append({
            "id": b.branch_id,
            "seed": _cplx(b.seed),
            "terms": b.terms,
            "radius_estimate": _num(b.radius_estimate),
            "scale_e": _num(b.scale),
            "root": _cplx(est.value) if est is not None else None,
            "residual": _num(est.residual) if est is not None else None,
            "error_estimate": _num(est.error_estimate) if est is not None else None,
            "oracle_distance": _num(est.oracle_distance) if est is not None else None,
            "status": b.status,
        })
    resolvent = None
    if report.resolvent is not None:
        resolvent = report.resolvent.to_json()
    oracle = None
    if report.oracle_roots is not None:
        oracle = {
            "roots": [_cplx(z) for z in report.oracle_roots],
            "max_match_distance": _num(report.match.max_distance) if report.match else None,
        }
    return {
        "input": {
            "degree": cfg.degree,
            "coefficients": [format_rational(c) for c in cfg.coefficients],
        },
        "normalization": {
            "factor": format_rational(report.factor),
            "applied": cfg.normalize,
        },
        "resolvent": resolvent,
        "branches": branches,
        "oracle": oracle,
        "diagnostics": list(report.diagnostics),
        "exit_status": report.exit_status,
    }


def dumps_json(obj, indent=2, _level=0) -> str:
    """Deterministic JSON text; floats are written with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    return json.dumps(obj)


def write_coefficients_csv(report: RunReport, handle):
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["branch_id", "i", "re", "im"])
    for b in report.branches:
        for i, c in enumerate(b.x_coefficients if b.coefficients else ()):
            z = complex(c)
            writer.writerow([b.branch_id, i, repr(z.real + 0.0), repr(z.imag + 0.0)])


def _summary(report: RunReport) -> str:
    cfg = report.config
    lines = [f"degree {cfg.degree}, a0 = {format_rational(cfg.coefficients[-1])}"]
    if cfg.normalize:
        lines.append(f"normalized by M = {format_rational(report.factor)}")
    if report.resolvent is not None:
        ode = report.resolvent
        lines.append(
            f"resolvent order {ode.order}, shift {format_rational(ode.shift)}, "
            f"leading coefficient degree {ode.coeffs[0].degree}"
        )
    estimates = {e.branch_id: e for e in report.estimates}
    for b in report.branches:
        est = estimates.get(b.branch_id)
        seed = complex(b.seed)
        line = f"branch {b.branch_id}: seed {seed.real:+.6g}{seed.imag:+.6g}j  {b.status}"
        if est is not None and est.value is not None:
            line += f"  root {est.value.real:+.15g}{est.value.imag:+.15g}j  |p| = {est.residual:.2e}"
        lines.append(line)
    if report.match is not None:
        if report.match.pairs:
            lines.append(f"oracle max match distance {report.match.max_distance:.3e}")
        else:
            lines.append("oracle: no converged branch to match")
    lines.append(f"exit status {report.exit_status}")
    return "\n".join(lines)


def emit_outputs(report: RunReport, cfg: RunConfig, out=None):
    out = out or sys.stdout
    print(_summary(report), file=out)
    if cfg.emit_ode:
        ode = report.resolvent.to_json() if report.resolvent is not None else None
        print(dumps_json({"resolvent": ode}), file=out)
    if cfg.json_path:
        try:
            with open(cfg.json_path, "w") as fh:
                fh.write(dumps_json(report_to_json(report)) + "\n")
        except OSError as exc:
            raise click.FileError(cfg.json_path, hint=str(exc))
    if cfg.csv_path:
        try:
            with open(cfg.csv_path, "w", newline="") as fh:
                write_coefficients_csv(report, fh)
        except OSError as exc:
            raise click.FileError(cfg.csv_path, hint=str(exc))


def _parse_scale(value):
    if value == "auto":
        return "auto"
    try:
        e = parse_rational(value)
    except ValueError:
        raise InputError(f"scale must be 'auto' or a positive number, got {value!r}") from None
    if e <= 0:
        raise InputError("scale must be positive")
    return e


@click.group()
def main():
    """Roots of a univariate polynomial from the series of its differential resolvent."""


@main.command()
@click.option("--coeffs", required=True, help='Descending coefficients a_n ... a_1 a_0, e.g. "1 0 1 1/10".')
@click.option("--terms", "-K", default=64, show_default=True, type=int, help="Series truncation index.")
@click.option("--scale", default="auto", show_default=True, help="'auto' or an explicit rescaling e > 0.")
@click.option("--no-normalize", is_flag=True, help="Skip the power-of-two coefficient normalization.")
@click.option("--oracle-check/--no-oracle-check", default=True, show_default=True,
              help="Compare series roots against the Aberth oracle.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("--emit-ode", is_flag=True, help="Print the homogeneous resolvent as JSON.")
@click.option("--emit-coeffs", "csv_path", type=click.Path(dir_okay=False),
              help="Write series coefficients as CSV here.")
@click.pass_context
def solve(ctx, coeffs, terms, scale, no_normalize, oracle_check, json_path, emit_ode, csv_path):
    """Solve p(x) = 0 for every root."""
    try:
        cfg = RunConfig(
            coefficients=parse_polynomial(coeffs),
            terms=terms,
            scale=_parse_scale(scale),
            normalize=not no_normalize,
            oracle_check=oracle_check,
            json_path=json_path,
            csv_path=csv_path,
            emit_ode=emit_ode,
        )
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_INPUT)
    report = run_pipeline(cfg)
    emit_outputs(report, cfg)
    for d in report.diagnostics:
        click.echo(d, err=True)
    ctx.exit(report.exit_status)


if __name__ == "__main__":
    main()

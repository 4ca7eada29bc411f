"""Command-line interface.

Subcommands read JSON from --in (or stdin), write JSON results to --out (or
stdout), and optionally dump per-iteration traces as CSV.  Exit codes:
0 success, 2 infeasible or residual above tolerance, 1 malformed input or
internal error (diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import grid as _grid
from .bench import InstanceSpec, gen_instance_meta, run_bench
from .binforms import BinaryForm, FormPair
from .certificates import Certificate, certificate_verify
from .errors import SosPolyError
from .extensions import (
    IntervalSpec,
    LinearCoeffMap,
    interval_certify,
    project_sos,
    sosopt_feasible,
)
from .solver import SolverConfig, lbfgs_minimize
from .trigpoly import TrigPoly


def _read_json(path: str | None):
    if path is None or path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _write_trace(trace, path: str | None) -> None:
    if not path:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "objective", "grad_norm", "fft_calls"])
        for row in trace.rows:
            writer.writerow(
                [row.iteration, row.objective, row.grad_norm, row.transform_calls]
            )


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        rank=args.rank,
        seed=args.seed,
        max_iters=args.max_iters,
        tol_rel_step=args.tol_rel_step,
    )


def _add_solver_flags(sp, rank_default=4):
    sp.add_argument("--rank", type=int, default=rank_default)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10, help="success threshold on the residual")
    sp.add_argument("--tol-rel-step", type=float, default=1e-7)
    sp.add_argument("--max-iters", type=int, default=50_000)
    sp.add_argument("--trace", metavar="PATH", default=None)
    sp.add_argument("--out", metavar="PATH", default=None)


def _cmd_gen(args) -> int:
    spec = InstanceSpec(args.degree, args.seed, args.min_offset)
    poly, meta = gen_instance_meta(spec)
    _write_json({"polynomial": poly.to_json(), "metadata": meta}, args.out)
    return 0


def _cmd_decompose(args) -> int:
    payload = _read_json(getattr(args, "in"))
    poly = TrigPoly.from_json(payload)
    factors, trace = lbfgs_minimize(poly, _solver_config(args))
    _write_trace(trace, args.trace)
    residual = trace.rows[-1].objective
    recon = factors.square_sum()
    recon_err = float(np.max(np.abs(recon.packed() - poly.packed())))
    _write_json(
        {
            "residual": residual,
            "iterations": trace.iterations,
            "fft_calls": trace.transform_calls,
            "termination": trace.reason,
            "reconstruction_error": recon_err,
            "factors": factors.to_json(),
        },
        args.out,
    )
    return 0 if residual <= args.tol else 2


def _cmd_project(args) -> int:
    payload = _read_json(getattr(args, "in"))
    poly = TrigPoly.from_json(payload)
    result = project_sos(poly, _solver_config(args), n_samples=args.samples)
    _write_trace(result.trace, args.trace)
    _write_json(
        {
            "residual": result.residual,
            "iterations": result.trace.iterations,
            "fft_calls": result.trace.transform_calls,
            "termination": result.trace.reason,
            "variational": {
                "n_samples": result.variational.n_samples,
                "max_relative_slack": result.variational.max_relative_slack,
                "ok": result.variational.ok,
            },
            "projection": result.factors.square_sum().to_json(),
            "factors": result.factors.to_json(),
        },
        args.out,
    )
    return 0 if result.residual <= args.tol else 2


def _cmd_certify_interval(args) -> int:
    payload = _read_json(getattr(args, "in"))
    p = np.array(payload["p"], dtype=float)
    if "multipliers" in payload and payload["multipliers"]:
        spec = IntervalSpec(
            tuple(tuple(iv) for iv in payload["intervals"]),
            tuple(np.array(w, dtype=float) for w in payload["multipliers"]),
        )
    else:
        (alpha, beta), = payload["intervals"]
        spec = IntervalSpec.single_interval(alpha, beta)
    result = interval_certify(p, spec, _solver_config(args), feas_tol=args.tol)
    _write_trace(result.trace, args.trace)
    _write_json(
        {
            "residual": result.residual,
            "feasible": result.feasible,
            "iterations": result.trace.iterations,
            "termination": result.trace.reason,
            "square_sums": [list(map(float, s)) for s in result.square_sums],
            "blocks": [[list(map(float, row)) for row in blk] for blk in result.blocks],
        },
        args.out,
    )
    return 0 if result.feasible else 2


def _cmd_sosopt(args) -> int:
    payload = _read_json(getattr(args, "in"))
    cmap = LinearCoeffMap.from_json(payload)
    result = sosopt_feasible(cmap, _solver_config(args), feas_tol=args.tol)
    _write_trace(result.trace, args.trace)
    _write_json(
        {
            "residual": result.residual,
            "feasible": result.feasible,
            "iterations": result.trace.iterations,
            "fft_calls": result.trace.transform_calls,
            "termination": result.trace.reason,
            "square_sum": result.factors.square_sum().to_json(),
            "factors": result.factors.to_json(),
        },
        args.out,
    )
    return 0 if result.feasible else 2


def _cmd_check_cert(args) -> int:
    payload = _read_json(getattr(args, "in"))
    cert = Certificate.from_json(payload["certificate"])
    u = FormPair.from_json(payload["u"])
    p = BinaryForm.from_json(payload["p"])
    report = certificate_verify(cert, u, p)
    _write_json(
        {
            "identity_residual": report.identity_residual,
            "bound_terms": report.bound_terms,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "objective_value": report.objective_value,
        },
        args.out,
    )
    scale = 1.0 + report.objective_value
    return 0 if report.identity_residual <= args.tol * scale else 2


def _cmd_bench(args) -> int:
    degrees = [int(d) for d in args.degrees.split(",") if d]
    ranks = [int(r) for r in args.ranks.split(",") if r]
    report = run_bench(
        degrees,
        ranks,
        args.runs,
        base_seed=args.seed,
        min_offset=args.min_offset,
        max_iters=args.max_iters,
        workers=args.workers,
    )
    if args.format == "json":
        _write_json(report.to_json(), args.out)
    else:
        rows = list(report.csv_rows())
        if args.out and args.out != "-":
            with open(args.out, "w", newline="") as fh:
                csv.writer(fh).writerows(rows)
        else:
            csv.writer(sys.stdout).writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sospoly",
        description="Sum-of-squares decomposition of trigonometric polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="generate a random nonnegative instance")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-offset", type=float, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("decompose", help="decompose a nonnegative polynomial")
    sp.add_argument("--in", dest="in", metavar="PATH", default=None)
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("project", help="project onto the square-sum cone")
    sp.add_argument("--in", dest="in", metavar="PATH", default=None)
    sp.add_argument("--samples", type=int, default=100)
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_project)

    sp = sub.add_parser(
        "certify-interval", help="weighted decomposition on interval unions"
    )
    sp.add_argument("--in", dest="in", metavar="PATH", default=None)
    _add_solver_flags(sp, rank_default=2)
    sp.set_defaults(func=_cmd_certify_interval)

    sp = sub.add_parser("sosopt", help="square sum under linear coefficient constraints")
    sp.add_argument("--in", dest="in", metavar="PATH", default=None)
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_sosopt)

    sp = sub.add_parser("check-cert", help="verify a stored certificate")
    sp.add_argument("--in", dest="in", metavar="PATH", default=None)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_check_cert)

    sp = sub.add_parser("bench", help="benchmark harness")
    sp.add_argument("--degrees", required=True, help="comma-separated degrees")
    sp.add_argument("--ranks", default="4", help="comma-separated ranks")
    sp.add_argument("--runs", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-offset", type=float, default=None)
    sp.add_argument("--max-iters", type=int, default=50_000)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SosPolyError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

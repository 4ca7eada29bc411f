"""Random instance generation and the benchmark harness.

Instances follow a fixed recipe: all 2n+1 coefficients drawn i.i.d. standard
normal from a seeded PCG64 generator (numpy's default_rng), then the constant
coefficient shifted so the minimum equals a prescribed positive offset.  The
minimum is located on a 16x-oversampled grid, refined by one local dense pass
plus a safeguarded Newton polish, so the shift is accurate to well below 1e-6.
"""

from __future__ import annotations

import dataclasses
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import grid as _grid
from .errors import OddDegree
from .solver import SolverConfig, lbfgs_minimize
from .trigpoly import TrigPoly, trig_eval_chunked


@dataclass(frozen=True)
class InstanceSpec:
    degree: int
    seed: int = 0
    min_offset: float | None = None  # None resolves to 0.1 * grid stddev

    def __post_init__(self):
        if self.degree < 2 or self.degree % 2 != 0:
            raise OddDegree(f"instance degree must be even >= 2, got {self.degree}")
        if self.min_offset is not None and not self.min_offset > 0:
            raise ValueError("min_offset must be positive")


def _refine_minimum(p: TrigPoly, t0: float, halfwidth: float) -> float:
    """Minimum near t0: dense local pass, then Newton on the derivative."""
    ts = np.linspace(t0 - halfwidth, t0 + halfwidth, 257)
    vals = trig_eval_chunked(p, ts)
    i = int(np.argmin(vals))
    t = float(ts[i])
    k = np.arange(1, p.degree + 1)
    d1 = TrigPoly(p.degree, 0.0, k * p.asin, -k * p.acos)
    d2 = TrigPoly(p.degree, 0.0, -k * k * p.acos, -k * k * p.asin)
    for _ in range(4):
        g = trig_eval_chunked(d1, np.array([t]))[0]
        h = trig_eval_chunked(d2, np.array([t]))[0]
        if h <= 0:
            break
        step = g / h
        if abs(step) > halfwidth:
            break
        t -= step
    cand = trig_eval_chunked(p, np.array([t, ts[i]]))
    return float(cand.min())


def gen_instance(spec: InstanceSpec) -> TrigPoly:
    poly, _ = gen_instance_meta(spec)
    return poly


def gen_instance_meta(spec: InstanceSpec):
    """Instance plus generation metadata (resolved offset, grid stddev)."""
    n = spec.degree
    rng = np.random.default_rng(spec.seed)
    a0 = float(rng.standard_normal())
    acos = rng.standard_normal(n)
    asin = rng.standard_normal(n)
    raw = TrigPoly(n, a0, acos, asin)

    m = 16 * (2 * n + 1) + 1
    values = _grid.eval_packed(raw.packed(), m)
    std = float(np.std(values))
    offset = spec.min_offset if spec.min_offset is not None else 0.1 * std
    idx = int(np.argmin(values))
    t0 = 2.0 * np.pi * idx / m
    rough = float(values[idx])
    refined = min(rough, _refine_minimum(raw, t0, 2.0 * np.pi / m))
    poly = TrigPoly(n, a0 + (offset - refined), acos, asin)
    meta = {
        "degree": n,
        "seed": spec.seed,
        "min_offset": float(offset),
        "grid_std": std,
        "generator": "numpy default_rng (PCG64)",
    }
    return poly, meta


# ---------------------------------------------------------------------------
# benchmark harness


@dataclass(frozen=True)
class BenchRow:
    degree: int
    rank: int
    run: int
    seed: int
    iterations: int
    transform_calls: int
    wall_time: float
    objective: float
    rel_objective: float
    reason: str
    status: str = "ok"


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rows": [dataclasses.asdict(r) for r in self.rows],
            "aggregates": list(self.aggregates),
        }

    def csv_rows(self):
        header = [f.name for f in dataclasses.fields(BenchRow)]
        yield header
        for r in self.rows:
            yield [getattr(r, h) for h in header]


def _derive_seed(base: int, degree: int, rank: int, run: int) -> int:
    ss = np.random.SeedSequence([base, degree, rank, run])
    return int(ss.generate_state(1, dtype=np.uint64)[0] % (2**63))


def _single_run(args):
    degree, rank, run, base_seed, min_offset, max_iters = args
    seed = _derive_seed(base_seed, degree, rank, run)
    try:
        poly = gen_instance(InstanceSpec(degree, seed, min_offset))
        cfg = SolverConfig(rank=rank, seed=seed ^ 0xA5A5, max_iters=max_iters)
        start = time.perf_counter()
        _, trace = lbfgs_minimize(poly, cfg)
        wall = time.perf_counter() - start
        m = 2 * degree + 1
        pv = _grid.eval_packed(poly.packed(), m)
        pnorm2 = float(pv @ pv) / m
        last = trace.rows[-1]
        return BenchRow(
            degree=degree,
            rank=rank,
            run=run,
            seed=seed,
            iterations=trace.iterations,
            transform_calls=trace.transform_calls,
            wall_time=wall,
            objective=last.objective,
            rel_objective=last.objective / pnorm2 if pnorm2 else float("nan"),
            reason=trace.reason,
        )
    except Exception as exc:  # failed runs are recorded, never fatal
        return BenchRow(
            degree=degree,
            rank=rank,
            run=run,
            seed=seed,
            iterations=0,
            transform_calls=0,
            wall_time=float("nan"),
            objective=float("nan"),
            rel_objective=float("nan"),
            reason="",
            status=f"error: {type(exc).__name__}: {exc}",
        )


def _init_worker():
    os.environ["SOSPOLY_THREADS"] = "1"


def bench_workers() -> int:
    try:
        return max(1, int(os.environ.get("SOSPOLY_THREADS", "1")))
    except ValueError:
        return 1


def run_bench(
    degrees,
    ranks,
    runs: int,
    *,
    base_seed: int = 0,
    min_offset: float | None = None,
    max_iters: int = 50_000,
    workers: int | None = None,
) -> BenchReport:
    """Solve `runs` fresh instances per (degree, rank) and aggregate.

    Runs execute in a process pool (size from SOSPOLY_THREADS unless given);
    each run is fully isolated and deterministic from the derived seed.
    Wall-clock times are reported for information and never asserted on.
    """
    tasks = [
        (int(n), int(r), i, base_seed, min_offset, max_iters)
        for n in degrees
        for r in ranks
        for i in range(runs)
    ]
    nworkers = workers if workers is not None else bench_workers()
    report = BenchReport()
    if nworkers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(
            max_workers=nworkers, initializer=_init_worker
        ) as pool:
            report.rows = list(pool.map(_single_run, tasks))
    else:
        report.rows = [_single_run(t) for t in tasks]

    for n in degrees:
        for r in ranks:
            ok = [
                row
                for row in report.rows
                if row.degree == n and row.rank == r and row.status == "ok"
            ]
            failed = sum(
                1
                for row in report.rows
                if row.degree == n and row.rank == r and row.status != "ok"
            )
            agg = {"degree": int(n), "rank": int(r), "runs_ok": len(ok), "runs_failed": failed}
            for key in ("iterations", "transform_calls", "wall_time"):
                vals = np.array([getattr(row, key) for row in ok], dtype=float)
                if vals.size:
                    agg[f"{key}_median"] = float(np.median(vals))
                    agg[f"{key}_p25"] = float(np.percentile(vals, 25))
                    agg[f"{key}_p75"] = float(np.percentile(vals, 75))
            report.aggregates.append(agg)
    return report

"""Generalizations of the plain decomposition.

* ``project_sos``      -- same objective, target not necessarily attainable;
                          the minimizer is the projection onto the cone of
                          square sums, checked variationally.
* ``interval_certify`` -- weighted decomposition p = sum_i a_i * q_i with
                          fixed multipliers a_i and q_i square sums, for
                          nonnegativity on interval unions.  Dense
                          coefficient-space path, no transforms.
* ``sosopt_feasible``  -- find a square sum whose coefficients satisfy given
                          linear equations, by pulling the constraint
                          residual back through the grid adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import grid as _grid
from .errors import DegreeIncompatible, DimensionMismatch, OddDegree
from .lbfgs import SolveTrace, minimize
from .solver import FactorMatrix, SolverConfig, lbfgs_minimize
from .trigpoly import TrigPoly


# ---------------------------------------------------------------------------
# projection onto the square-sum cone


@dataclass(frozen=True)
class VariationalReport:
    n_samples: int
    max_relative_slack: float
    tol: float
    ok: bool


@dataclass(frozen=True)
class ProjectionResult:
    factors: FactorMatrix
    residual: float
    variational: VariationalReport
    trace: SolveTrace


def _random_square_sum(rng, n: int, m: int, n_squares: int = 3) -> np.ndarray:
    coeffs = rng.standard_normal((n_squares, n + 1))
    s = _grid.eval_packed(coeffs, m)
    vals = (s * s).sum(axis=0)
    return vals / np.sqrt(max(float(vals @ vals) / m, 1e-300))


def project_sos(
    p: TrigPoly,
    cfg: SolverConfig = SolverConfig(),
    *,
    n_samples: int = 100,
    var_tol: float = 1e-8,
) -> ProjectionResult:
    """Minimize the decomposition objective for a possibly-indefinite target.

    At any second-order limit the square sum is the projection of p onto the
    cone, so <sigma(u) - q, sigma(u) - p> <= 0 for every square sum q.  The
    report checks that inequality on random normalized square sums, with
    slack var_tol * ||q|| * ||sigma(u) - p|| to absorb solver tolerance.
    """
    factors, trace = lbfgs_minimize(p, cfg)
    n = p.degree
    m = 2 * n + 1
    p_vals = _grid.to_grid(p, _grid.Grid(m))
    s = _grid.eval_packed(factors.coeffs, m)
    sig_vals = (s * s).sum(axis=0)
    resid_vals = sig_vals - p_vals
    residual = float(resid_vals @ resid_vals) / m
    resid_norm = np.sqrt(max(residual, 0.0))

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0x5051]))
    worst = -np.inf
    for _ in range(n_samples):
        q_vals = _random_square_sum(rng, n // 2, m)
        lhs = float((sig_vals - q_vals) @ resid_vals) / m
        rel = lhs / max(resid_norm, 1e-300)  # ||q|| = 1 by construction
        worst = max(worst, rel)
    report = VariationalReport(
        n_samples=n_samples,
        max_relative_slack=float(worst),
        tol=var_tol,
        ok=bool(worst <= var_tol or residual == 0.0),
    )
    return ProjectionResult(factors, residual, report, trace)


# ---------------------------------------------------------------------------
# nonnegativity on interval unions


def _trimmed_degree(coeffs) -> int:
    arr = np.asarray(coeffs, dtype=float)
    nz = np.nonzero(arr)[0]
    return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True)
class IntervalSpec:
    """Interval union with one fixed polynomial weight per square-sum block.

    Multiplier i is a coefficient array (ascending powers); it must be
    nonnegative on every interval, which is checked by dense sampling at 64
    points per coefficient.
    """

    intervals: tuple
    multipliers: tuple

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        mults = tuple(np.asarray(m, dtype=float) for m in self.multipliers)
        for a, b in ivs:
            if not a < b:
                raise DegreeIncompatible(f"empty interval [{a}, {b}]")
        if not mults:
            raise DegreeIncompatible("need at least one multiplier")
        for w in mults:
            w.setflags(write=False)
            scale = float(np.max(np.abs(w))) or 1.0
            for a, b in ivs:
                xs = np.linspace(a, b, 64 * (len(w) + 1))
                if np.polyval(w[::-1], xs).min() < -1e-9 * scale:
                    raise ValueError("multiplier is negative inside an interval")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "multipliers", mults)

    @staticmethod
    def single_interval(alpha: float, beta: float) -> "IntervalSpec":
        """The preset pair {1, (x - alpha)(beta - x)} for even total degree."""
        quad = np.array(
            [-alpha * beta, alpha + beta, -1.0]
        )  # (x - alpha)(beta - x)
        return IntervalSpec(((alpha, beta),), (np.array([1.0]), quad))

    def to_json(self) -> dict:
        return {
            "intervals": [list(iv) for iv in self.intervals],
            "multipliers": [list(map(float, w)) for w in self.multipliers],
        }

    @staticmethod
    def from_json(obj: dict) -> "IntervalSpec":
        return IntervalSpec(
            tuple(tuple(iv) for iv in obj["intervals"]),
            tuple(np.array(w, dtype=float) for w in obj["multipliers"]),
        )


@dataclass(frozen=True)
class IntervalResult:
    blocks: list  # per multiplier: (r, d_i + 1) coefficient arrays
    square_sums: list  # per multiplier: coefficient array of q_i
    residual: float
    feasible: bool
    trace: SolveTrace


def interval_certify(
    p_coeffs,
    spec: IntervalSpec,
    cfg: SolverConfig = SolverConfig(),
    *,
    feas_tol: float | None = None,
) -> IntervalResult:
    """Find square sums q_i with sum_i a_i q_i = p (dense coefficient path).

    The ambient degree is len(p_coeffs) - 1 and must satisfy
    deg(a_i) + 2 d_i = deg(p) for every block; pad p with zeros to an even
    compatible degree when needed.  Practical ceiling is a few hundred
    degrees; the grid solver covers the unweighted large-scale case.
    """
    p = np.asarray(p_coeffs, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise DimensionMismatch("p must be a 1-d coefficient array")
    total = p.size - 1
    half_degrees = []
    for w in spec.multipliers:
        da = _trimmed_degree(w)
        if (total - da) % 2 != 0 or total < da:
            raise DegreeIncompatible(
                f"deg(p) = {total} incompatible with multiplier degree {da}"
            )
        half_degrees.append((total - da) // 2)

    r = cfg.rank
    sizes = [r * (d + 1) for d in half_degrees]
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    rng = np.random.default_rng(cfg.seed)
    scale = cfg.init_scale
    if scale is None:
        scale = float(
            np.sqrt(max(np.mean(np.abs(p)), 1e-12) / max(sum(sizes), 1))
        )
    x0 = scale * rng.standard_normal(offsets[-1])

    mults = [np.trim_zeros(np.asarray(w, dtype=float), "b") for w in spec.multipliers]
    mults = [w if w.size else np.zeros(1) for w in mults]

    def unpack(x):
        return [
            x[offsets[i] : offsets[i + 1]].reshape(r, half_degrees[i] + 1)
            for i in range(len(mults))
        ]

    def fun(x):
        blocks = unpack(x)
        e = -p
        sq = []
        for w, blk in zip(mults, blocks):
            s_i = np.zeros(2 * (blk.shape[1] - 1) + 1)
            for row in blk:
                s_i += np.convolve(row, row)
            sq.append(s_i)
            e = e + np.convolve(w, s_i)
        f = float(e @ e)
        g = np.empty_like(x)
        for i, (w, blk) in enumerate(zip(mults, blocks)):
            back = np.correlate(e, w, mode="valid")  # adjoint of conv by a_i
            gi = np.stack(
                [4.0 * np.correlate(back, row, mode="valid") for row in blk]
            )
            g[offsets[i] : offsets[i + 1]] = gi.ravel()
        return f, g

    pnorm2 = float(p @ p)
    tol_obj = cfg.tol_objective if cfg.tol_objective is not None else 1e-14 * max(pnorm2, 1.0)
    result = minimize(
        fun,
        x0,
        memory=cfg.memory,
        max_iters=cfg.max_iters,
        tol_rel_step=cfg.tol_rel_step,
        tol_objective=tol_obj,
    )
    blocks = unpack(result.x)
    square_sums = []
    for blk in blocks:
        s_i = np.zeros(2 * (blk.shape[1] - 1) + 1)
        for row in blk:
            s_i += np.convolve(row, row)
        square_sums.append(s_i)
    threshold = feas_tol if feas_tol is not None else 1e-10 * (1.0 + pnorm2)
    return IntervalResult(
        blocks=blocks,
        square_sums=square_sums,
        residual=result.objective,
        feasible=bool(result.objective <= threshold),
        trace=result.trace,
    )


# ---------------------------------------------------------------------------
# linear coefficient constraints


@dataclass(frozen=True)
class LinearCoeffMap:
    """Sparse linear functionals on packed trig coefficients with targets b.

    Row format: list of (coefficient index, weight) pairs; index 0 is the
    constant coefficient, 1..n the cosine block, n+1..2n the sine block.
    """

    degree: int
    rows: tuple
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        width = 2 * self.degree + 1
        rows = tuple(
            tuple((int(i), float(w)) for i, w in row) for row in self.rows
        )
        for row in rows:
            for i, _ in row:
                if not 0 <= i < width:
                    raise DimensionMismatch(f"coefficient index {i} out of range")
        b = np.asarray(self.b, dtype=float)
        if b.shape != (len(rows),):
            raise DimensionMismatch("b must have one entry per row")
        b.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "b", b)

    @staticmethod
    def identity(p: TrigPoly) -> "LinearCoeffMap":
        packed = p.packed()
        rows = tuple(((i, 1.0),) for i in range(packed.size))
        return LinearCoeffMap(p.degree, rows, packed)

    def matrix(self):
        from scipy.sparse import csr_matrix

        data, indices, indptr = [], [], [0]
        for row in self.rows:
            for i, w in row:
                indices.append(i)
                data.append(w)
            indptr.append(len(indices))
        return csr_matrix(
            (data, indices, indptr), shape=(len(self.rows), 2 * self.degree + 1)
        )

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "rows": [[[i, w] for i, w in row] for row in self.rows],
            "b": list(map(float, self.b)),
        }

    @staticmethod
    def from_json(obj: dict) -> "LinearCoeffMap":
        return LinearCoeffMap(
            int(obj["degree"]),
            tuple(tuple((int(i), float(w)) for i, w in row) for row in obj["rows"]),
            np.array(obj["b"], dtype=float),
        )


@dataclass(frozen=True)
class SosOptResult:
    factors: FactorMatrix
    residual: float
    feasible: bool
    trace: SolveTrace


def sosopt_feasible(
    coeff_map: LinearCoeffMap,
    cfg: SolverConfig = SolverConfig(),
    *,
    feas_tol: float | None = None,
) -> SosOptResult:
    """Search for a square sum whose coefficients satisfy the linear map.

    Minimizes the squared constraint residual; a residual at the floor
    certifies feasibility, while callers interpret a residual bounded away
    from zero as evidence of infeasibility (it converges to the distance
    from the image of the cone).
    """
    n = coeff_map.degree
    if n % 2 != 0 or n < 2:
        raise OddDegree(f"decomposition space needs even degree >= 2, got {n}")
    q = n // 2
    m = 2 * n + 1
    R = coeff_map.matrix()
    b = coeff_map.b
    r = cfg.rank

    start_calls = _grid.transform_calls()
    rng = np.random.default_rng(cfg.seed)
    scale = cfg.init_scale
    if scale is None:
        scale = float(np.sqrt(max(np.mean(np.abs(b)), 1e-12) / (r * (n + 1))))
    x0 = scale * rng.standard_normal((r, n + 1)).ravel()

    dmat = np.full(2 * n + 1, 2.0 / m)
    dmat[0] = 1.0 / m

    def fun(x):
        u = x.reshape(r, n + 1)
        s = _grid.eval_packed(u, m)
        v = (s * s).sum(axis=0)
        coeffs = _grid.adjoint_packed(v, n) * dmat
        rho = R @ coeffs - b
        f = float(rho @ rho)
        phi = _grid.eval_packed((2.0 * (R.T @ rho)) * dmat, m)
        g = 2.0 * _grid.adjoint_packed(phi[None, :] * s, q)
        return f, g.ravel()

    bnorm2 = float(b @ b)
    tol_obj = cfg.tol_objective if cfg.tol_objective is not None else 1e-14 * max(bnorm2, 1.0)
    result = minimize(
        fun,
        x0,
        memory=cfg.memory,
        max_iters=cfg.max_iters,
        tol_rel_step=cfg.tol_rel_step,
        tol_objective=tol_obj,
        cost_counter=_grid.transform_calls,
    )
    from dataclasses import replace

    rows = [
        replace(row, transform_calls=row.transform_calls - start_calls)
        for row in result.trace.rows
    ]
    trace = SolveTrace(rows=rows, reason=result.trace.reason)
    threshold = feas_tol if feas_tol is not None else 1e-10 * (1.0 + bnorm2)
    return SosOptResult(
        factors=FactorMatrix(q, result.x.reshape(r, n + 1)),
        residual=result.objective,
        feasible=bool(result.objective <= threshold),
        trace=trace,
    )

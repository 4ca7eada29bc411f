"""Low-rank least-squares factorization of nonnegative trig polynomials.

The decomposition problem is posed as minimizing

    f_p(U) = (1/m) * sum_k ( ||U^T B_k||^2 - p(x_k) )^2,     m = 2n+1,

over factor matrices U whose r columns hold coefficients of degree-(n/2)
trig polynomials; B_k is evaluation at the grid node x_k.  One objective
evaluation costs r forward transforms, one gradient adds r adjoint
transforms, so a value-and-gradient pass is O(r m log m).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import grid as _grid
from .errors import (
    DimensionMismatch,
    OddDegree,
    ShapeMismatch,
    TooLargeForDense,
)
from .lbfgs import MinimizeResult, SolveTrace, minimize
from .trigpoly import TrigPoly


@dataclass(frozen=True)
class FactorMatrix:
    """r coefficient columns, each a trig polynomial of one half degree."""

    half_degree: int
    coeffs: np.ndarray = field(repr=False)  # shape (r, 2*half_degree + 1)

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 * self.half_degree + 1:
            raise ShapeMismatch(
                f"expected (r, {2 * self.half_degree + 1}) coefficients"
            )
        if arr.shape[0] < 1:
            raise ShapeMismatch("rank must be at least 1")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def rank(self) -> int:
        return self.coeffs.shape[0]

    def columns(self) -> list[TrigPoly]:
        return [TrigPoly.from_packed(row) for row in self.coeffs]

    @staticmethod
    def from_columns(cols) -> "FactorMatrix":
        packed = np.stack([c.packed() for c in cols])
        return FactorMatrix((packed.shape[1] - 1) // 2, packed)

    def square_sum(self) -> TrigPoly:
        """The polynomial sum_i u_i^2, recovered exactly through the grid."""
        n = 2 * self.half_degree
        m = 2 * n + 1
        samples = _grid.eval_packed(self.coeffs, m)
        return _grid.from_grid((samples * samples).sum(axis=0), n)

    def to_json(self) -> dict:
        return {
            "half_degree": self.half_degree,
            "columns": [c.to_json() for c in self.columns()],
        }

    @staticmethod
    def from_json(obj: dict) -> "FactorMatrix":
        return FactorMatrix.from_columns(
            [TrigPoly.from_json(c) for c in obj["columns"]]
        )


@dataclass(frozen=True)
class SolverConfig:
    rank: int = 4
    memory: int = 10
    max_iters: int = 50_000
    tol_rel_step: float = 1e-7
    tol_objective: float | None = None  # default resolves to 1e-14 * <p, p>
    init_scale: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ShapeMismatch("rank must be at least 1")
        if self.tol_rel_step <= 0:
            raise ValueError("tol_rel_step must be positive")
        if self.tol_objective is not None and self.tol_objective <= 0:
            raise ValueError("tol_objective must be positive")
        if self.memory < 1 or self.max_iters < 1:
            raise ValueError("memory and max_iters must be positive")


def _check_grid(U: FactorMatrix, p_values: np.ndarray) -> int:
    m = int(np.asarray(p_values).shape[-1])
    n = 2 * U.half_degree
    if m != 2 * n + 1:
        raise DimensionMismatch(
            f"grid has {m} points but half-degree {U.half_degree} needs {2 * n + 1}"
        )
    return m


def objective(U: FactorMatrix, p_values: np.ndarray) -> float:
    """f_p(U) under the sampled inner product; nonnegative."""
    m = _check_grid(U, p_values)
    s = _grid.eval_packed(U.coeffs, m)
    e = (s * s).sum(axis=0) - p_values
    return float(e @ e) / m


def gradient(U: FactorMatrix, p_values: np.ndarray) -> np.ndarray:
    """Entrywise gradient of f_p, same shape as U.coeffs.

    Computed as: transform each column to the grid, form the residual,
    multiply pointwise, transform back, scale by 4/m.
    """
    m = _check_grid(U, p_values)
    s = _grid.eval_packed(U.coeffs, m)
    e = (s * s).sum(axis=0) - p_values
    return (4.0 / m) * _grid.adjoint_packed(e[None, :] * s, U.half_degree)


def value_and_gradient(U: FactorMatrix, p_values: np.ndarray):
    """(f, grad) sharing the forward transforms between the two."""
    m = _check_grid(U, p_values)
    s = _grid.eval_packed(U.coeffs, m)
    e = (s * s).sum(axis=0) - p_values
    f = float(e @ e) / m
    g = (4.0 / m) * _grid.adjoint_packed(e[None, :] * s, U.half_degree)
    return f, g


def hess_quadform(U: FactorMatrix, V: FactorMatrix, p_values: np.ndarray) -> float:
    """Second directional derivative d^2/de^2 f(U + e V) at e = 0."""
    if V.coeffs.shape != U.coeffs.shape:
        raise ShapeMismatch("V must have the same shape as U")
    m = _check_grid(U, p_values)
    s = _grid.eval_packed(U.coeffs, m)
    t = _grid.eval_packed(V.coeffs, m)
    e = (s * s).sum(axis=0) - p_values
    sv = (t * t).sum(axis=0)
    au = (s * t).sum(axis=0)
    return float(4.0 * (sv @ e) + 8.0 * (au @ au)) / m


def _hessvec(s, e, w_coeffs, half_degree, m):
    """Hessian-vector product at the point with samples s and residual e."""
    t = _grid.eval_packed(w_coeffs, m)
    aw = (s * t).sum(axis=0)
    return (4.0 / m) * _grid.adjoint_packed(e[None, :] * t + 2.0 * aw[None, :] * s, half_degree)


def default_init_scale(p_values: np.ndarray, rank: int, n: int) -> float:
    """Entry scale so the initial square sum starts near the size of p."""
    mean_p = float(np.mean(p_values))
    return float(np.sqrt(max(mean_p, 1e-12) / (rank * (n + 1))))


def lbfgs_minimize(p: TrigPoly, cfg: SolverConfig = SolverConfig()):
    """Minimize f_p from a seeded random start.

    Returns (FactorMatrix, SolveTrace).  Deterministic given cfg.seed.
    Raises OddDegree for odd-degree input (the even-degree sampling basis is
    the only one supported) and NonFiniteObjective on divergence.
    """
    if p.degree % 2 != 0 or p.degree < 2:
        raise OddDegree(f"solver needs even degree >= 2, got {p.degree}")
    n = p.degree
    q = n // 2
    m = 2 * n + 1
    start_calls = _grid.transform_calls()
    p_values = _grid.to_grid(p, _grid.Grid(m))

    pnorm2 = float(p_values @ p_values) / m
    tol_obj = cfg.tol_objective if cfg.tol_objective is not None else 1e-14 * pnorm2
    scale = (
        cfg.init_scale
        if cfg.init_scale is not None
        else default_init_scale(p_values, cfg.rank, n)
    )
    rng = np.random.default_rng(cfg.seed)
    x0 = scale * rng.standard_normal((cfg.rank, n + 1))

    def fun(x: np.ndarray):
        u = x.reshape(cfg.rank, n + 1)
        s = _grid.eval_packed(u, m)
        e = (s * s).sum(axis=0) - p_values
        f = float(e @ e) / m
        g = (4.0 / m) * _grid.adjoint_packed(e[None, :] * s, q)
        return f, g.ravel()

    result = minimize(
        fun,
        x0.ravel(),
        memory=cfg.memory,
        max_iters=cfg.max_iters,
        tol_rel_step=cfg.tol_rel_step,
        tol_objective=tol_obj,
        cost_counter=_grid.transform_calls,
    )
    # report transform calls relative to the start of this solve
    rows = [
        replace(r, transform_calls=r.transform_calls - start_calls)
        for r in result.trace.rows
    ]
    trace = SolveTrace(rows=rows, reason=result.trace.reason)
    return FactorMatrix(q, result.x.reshape(cfg.rank, n + 1)), trace


@dataclass(frozen=True)
class SocpReport:
    grad_norm: float
    min_hessian_eig_estimate: float
    is_socp: bool


def socp_check(
    U: FactorMatrix,
    p: TrigPoly,
    tol: float,
    *,
    mode: str = "auto",
    dense_cap: int = 2000,
) -> SocpReport:
    """Second-order criticality test: zero gradient and PSD Hessian within tol.

    The full Hessian is assembled densely for up to `dense_cap` variables;
    beyond that an iterative extremal eigensolver is used with the
    Hessian-vector product as the oracle (mode="iterative"), or
    TooLargeForDense is raised when dense assembly was demanded.
    """
    n = 2 * U.half_degree
    m = 2 * n + 1
    p_values = _grid.to_grid(p.padded(n) if p.degree < n else p, _grid.Grid(m))
    s = _grid.eval_packed(U.coeffs, m)
    e = (s * s).sum(axis=0) - p_values
    g = (4.0 / m) * _grid.adjoint_packed(e[None, :] * s, U.half_degree)
    grad_norm = float(np.linalg.norm(g))

    r, width = U.coeffs.shape
    nvars = r * width
    if mode not in ("auto", "dense", "iterative"):
        raise ValueError(f"unknown mode {mode!r}")
    use_dense = (mode == "dense") or (mode == "auto" and nvars <= dense_cap)
    if mode == "dense" and nvars > dense_cap:
        raise TooLargeForDense(f"{nvars} variables exceed dense cap {dense_cap}")

    if use_dense:
        basis = _grid.eval_packed(np.eye(width), m)  # (width, m) basis samples
        base_block = (4.0 / m) * (basis @ (e[None, :] * basis).T)
        hess = np.zeros((nvars, nvars))
        for i in range(r):
            for j in range(i, r):
                block = (8.0 / m) * (basis @ ((s[i] * s[j])[None, :] * basis).T)
                if i == j:
                    block = block + base_block
                hess[i * width : (i + 1) * width, j * width : (j + 1) * width] = block
                if i != j:
                    hess[j * width : (j + 1) * width, i * width : (i + 1) * width] = block.T
        min_eig = float(np.linalg.eigvalsh(hess)[0])
    else:
        from scipy.sparse.linalg import LinearOperator, eigsh

        def matvec(w):
            wc = np.asarray(w, dtype=float).reshape(r, width)
            return _hessvec(s, e, wc, U.half_degree, m).ravel()

        op = LinearOperator((nvars, nvars), matvec=matvec, dtype=float)
        vals = eigsh(op, k=1, which="SA", return_eigenvectors=False, maxiter=5000)
        min_eig = float(vals[0])

    return SocpReport(
        grad_norm=grad_norm,
        min_hessian_eig_estimate=min_eig,
        is_socp=bool(grad_norm <= tol and min_eig >= -tol),
    )

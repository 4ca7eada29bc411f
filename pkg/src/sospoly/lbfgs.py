"""Limited-memory quasi-Newton driver with a strong Wolfe line search.

The driver is deliberately generic: it minimizes any callable returning
(value, gradient) over a flat array, so the trig solver, the interval
decomposition, and the linearly-constrained path all share it.  Accepted
iterates are recorded in a trace together with a caller-supplied cost counter
(the solver passes the cumulative transform count).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import LineSearchFailure, NonFiniteObjective


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    objective: float
    grad_norm: float
    step: float
    transform_calls: int


@dataclass
class SolveTrace:
    """Per-iteration record of accepted points plus the termination reason."""

    rows: list = field(default_factory=list)
    reason: str = ""

    @property
    def iterations(self) -> int:
        return max(len(self.rows) - 1, 0)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.rows])

    @property
    def transform_calls(self) -> int:
        return self.rows[-1].transform_calls if self.rows else 0


@dataclass
class MinimizeResult:
    x: np.ndarray
    objective: float
    gradient: np.ndarray
    trace: SolveTrace


def _check_finite(f: float) -> float:
    if not np.isfinite(f):
        raise NonFiniteObjective(f"objective evaluated to {f!r}")
    return f


def _quadratic_min(a, fa, da, b, fb):
    """Minimizer of the quadratic through (a, fa) with slope da and (b, fb)."""
    h = b - a
    if h == 0:
        return None
    denom = fb - fa - da * h
    if denom == 0:
        return None
    return a - da * h * h / (2.0 * denom)


def _strong_wolfe(evaluate, f0, dphi0, alpha_init, c1, c2, max_evals=60):
    """Find alpha satisfying the strong Wolfe conditions.

    `evaluate(alpha)` returns (f, g, dphi).  Returns (alpha, f, g, n_evals).
    """
    if dphi0 >= 0:
        raise LineSearchFailure("search direction is not a descent direction")
    alpha_prev, f_prev, dphi_prev = 0.0, f0, dphi0
    alpha = alpha_init
    evals = 0

    def zoom(lo, f_lo, dphi_lo, hi, f_hi):
        nonlocal evals
        for _ in range(40):
            cand = _quadratic_min(lo, f_lo, dphi_lo, hi, f_hi)
            width = abs(hi - lo)
            if (
                cand is None
                or not np.isfinite(cand)
                or cand <= min(lo, hi) + 0.1 * width
                or cand >= max(lo, hi) - 0.1 * width
            ):
                cand = 0.5 * (lo + hi)
            f_c, g_c, dphi_c = evaluate(cand)
            evals += 1
            if f_c > f0 + c1 * cand * dphi0 or f_c >= f_lo:
                hi, f_hi = cand, f_c
            else:
                if abs(dphi_c) <= -c2 * dphi0:
                    return cand, f_c, g_c
                if dphi_c * (hi - lo) >= 0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, dphi_lo = cand, f_c, dphi_c
            if width < 1e-16 * max(1.0, abs(lo)):
                break
        if f_lo < f0:  # sufficient decrease holds at lo; accept what we have
            f_l, g_l, _ = evaluate(lo)
            evals += 1
            return lo, f_l, g_l
        raise LineSearchFailure("zoom failed to satisfy the Wolfe conditions")

    for i in range(max_evals):
        f_a, g_a, dphi_a = evaluate(alpha)
        evals += 1
        if f_a > f0 + c1 * alpha * dphi0 or (i > 0 and f_a >= f_prev):
            a, f, g = zoom(alpha_prev, f_prev, dphi_prev, alpha, f_a)
            return a, f, g, evals
        if abs(dphi_a) <= -c2 * dphi0:
            return alpha, f_a, g_a, evals
        if dphi_a >= 0:
            a, f, g = zoom(alpha, f_a, dphi_a, alpha_prev, f_prev)
            return a, f, g, evals
        alpha_prev, f_prev, dphi_prev = alpha, f_a, dphi_a
        alpha = min(2.0 * alpha, 1e12)
    raise LineSearchFailure("line search exhausted its evaluation budget")


def minimize(
    value_and_grad,
    x0: np.ndarray,
    *,
    memory: int = 10,
    max_iters: int = 50_000,
    tol_rel_step: float = 1e-7,
    tol_objective: float = 0.0,
    c1: float = 1e-4,
    c2: float = 0.9,
    cost_counter=None,
) -> MinimizeResult:
    """L-BFGS with two-loop recursion; terminates on the per-entry relative
    step tolerance, the objective floor, or the iteration cap, whichever hits
    first.  Accepted objective values are non-increasing by construction."""
    counter = cost_counter if cost_counter is not None else (lambda: 0)
    x = np.array(x0, dtype=float).ravel()
    f, g = value_and_grad(x)
    f = _check_finite(f)
    if not np.all(np.isfinite(g)):
        raise NonFiniteObjective("gradient is not finite at the initial point")

    trace = SolveTrace()
    trace.rows.append(TraceRow(0, f, float(np.linalg.norm(g)), 0.0, counter()))
    if f <= tol_objective:
        trace.reason = "objective_floor"
        return MinimizeResult(x, f, g, trace)

    history: deque = deque(maxlen=memory)
    for iteration in range(1, max_iters + 1):
        d = _two_loop_direction(g, history)
        dphi0 = float(g @ d)
        if dphi0 >= 0 or not np.all(np.isfinite(d)):
            d = -g
            dphi0 = float(g @ d)
            if dphi0 >= 0:  # gradient numerically zero
                trace.reason = "step_tolerance"
                break

        def evaluate(alpha, _d=d):
            xa = x + alpha * _d
            fa, ga = value_and_grad(xa)
            return _check_finite(fa), ga, float(ga @ _d)

        if iteration == 1:
            alpha_init = min(1e8, max(1e-12, 2.0 * max(f, 1e-300) / (-dphi0)))
        else:
            alpha_init = 1.0
        try:
            alpha, f_new, g_new, _ = _strong_wolfe(
                evaluate, f, dphi0, alpha_init, c1, c2
            )
        except LineSearchFailure:
            if np.array_equal(d, -g):
                trace.reason = "line_search_failure"
                break
            # retry once along steepest descent
            d = -g
            dphi0 = float(g @ d)
            try:
                alpha, f_new, g_new, _ = _strong_wolfe(
                    evaluate, f, dphi0, 1.0, c1, c2
                )
            except LineSearchFailure:
                trace.reason = "line_search_failure"
                break

        step = alpha * d
        x_new = x + step
        y = g_new - g
        sy = float(step @ y)
        if sy > max(1e-10 * np.linalg.norm(step) * np.linalg.norm(y), 1e-300):
            history.append((step, y, 1.0 / sy))

        x, f, g = x_new, f_new, g_new
        trace.rows.append(
            TraceRow(iteration, f, float(np.linalg.norm(g)), float(alpha), counter())
        )

        if f <= tol_objective:
            trace.reason = "objective_floor"
            break
        scale = float(np.max(np.abs(x))) if x.size else 0.0
        if np.all(np.abs(step) <= tol_rel_step * (np.abs(x) + tol_rel_step * scale)):
            trace.reason = "step_tolerance"
            break
    else:
        trace.reason = "max_iterations"
    if not trace.reason:
        trace.reason = "max_iterations"
    return MinimizeResult(x, f, g, trace)


def _two_loop_direction(g: np.ndarray, history: deque) -> np.ndarray:
    if not history:
        return -g
    s_last, y_last, _ = history[-1]
    y_norm2 = float(y_last @ y_last)
    if y_norm2 <= 0.0 or not np.isfinite(y_norm2):
        return -g
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    gamma = float(s_last @ y_last) / y_norm2
    r = gamma * q
    for (s, y, rho), a in zip(history, reversed(alphas)):
        b = rho * float(y @ r)
        r += (a - b) * s
    return -r

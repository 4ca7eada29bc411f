"""Evaluation on equispaced circle points and the fast transforms behind it.

The inner product used throughout the solver is

    <p, q> = (1/m) * sum_k p(x_k) q(x_k),    x_k = 2*pi*k/m,  k = 0..m-1,

with m odd.  (Indexing from 0 instead of 1 visits the same point set, since
x_m would coincide with x_0.)  For trig polynomials with deg p + deg q <= m-1
this quadrature equals the continuous average over the circle.

Transforms are computed by a Bluestein chirp-z transform running on top of
smooth-size complex FFTs.  Compared to calling an FFT directly at the odd
grid sizes this keeps the cost uniform in m, which is what gives the solver
its O(m log m) gradient for every degree, not just lucky factorizations.
Chirp tables and convolution kernels are cached per (m, direction); the cache
is guarded by a lock so concurrent callers see pure behavior.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .errors import DimensionMismatch, GridTooSmall
from .trigpoly import TrigPoly

_plan_lock = threading.Lock()
_plans: dict = {}

_count_lock = threading.Lock()
_transform_calls = 0


def transform_calls() -> int:
    """Monotone per-process count of transform invocations (one per batch row)."""
    return _transform_calls


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SOSPOLY_THREADS", "1")))
    except ValueError:
        return 1


def _plan(m: int, sign: int):
    key = (m, sign)
    plan = _plans.get(key)
    if plan is None:
        with _plan_lock:
            plan = _plans.get(key)
            if plan is None:
                k = np.arange(m, dtype=np.int64)
                # angles via k^2 mod 2m keep full precision at large m
                ang = np.pi * ((k * k) % (2 * m)) / m
                w = np.exp(sign * 1j * ang)
                size = _fft.next_fast_len(2 * m - 1)
                kernel = np.zeros(size, dtype=np.complex128)
                kernel[:m] = np.conj(w)
                kernel[size - m + 1 :] = np.conj(w[1:][::-1])
                plan = (w, size, _fft.fft(kernel))
                _plans[key] = plan
    return plan


def _czt(x: np.ndarray, sign: int) -> np.ndarray:
    """Batched DFT_j = sum_k x_k exp(sign * 2i pi jk / m) along the last axis."""
    global _transform_calls
    m = x.shape[-1]
    w, size, kernel_fft = _plan(m, sign)
    workers = _workers()
    y = _fft.fft(x * w, n=size, axis=-1, workers=workers)
    z = _fft.ifft(y * kernel_fft, axis=-1, workers=workers)[..., :m]
    rows = 1 if x.ndim == 1 else int(np.prod(x.shape[:-1]))
    with _count_lock:
        _transform_calls += rows
    return z * w


@dataclass(frozen=True)
class Grid:
    """m equispaced points on the circle; nodes are implicit."""

    m: int

    def __post_init__(self):
        if self.m < 3 or self.m % 2 == 0:
            raise DimensionMismatch("grid size must be odd and at least 3")

    def nodes(self) -> np.ndarray:
        """Explicit node values 2*pi*k/m, intended for debugging only."""
        return 2.0 * np.pi * np.arange(self.m) / self.m


def eval_packed(packed: np.ndarray, m: int) -> np.ndarray:
    """Samples at the m grid points of packed coefficients [a0, cos.., sin..].

    Accepts a batch on the leading axes.  Requires m >= 2q+1 for half-degree q
    so the spectrum embeds without aliasing.
    """
    packed = np.asarray(packed, dtype=float)
    q = (packed.shape[-1] - 1) // 2
    if packed.shape[-1] != 2 * q + 1:
        raise DimensionMismatch("packed coefficient length must be odd")
    if m < 2 * q + 1:
        raise GridTooSmall(f"need m >= {2 * q + 1}, got {m}")
    spec = np.zeros(packed.shape[:-1] + (m,), dtype=np.complex128)
    spec[..., 0] = packed[..., 0]
    if q:
        pos = 0.5 * (packed[..., 1 : q + 1] - 1j * packed[..., q + 1 :])
        spec[..., 1 : q + 1] = pos
        spec[..., m - q :] = np.conj(pos)[..., ::-1]
    return _czt(spec, +1).real


def adjoint_packed(values: np.ndarray, half_degree: int) -> np.ndarray:
    """Adjoint of eval_packed: grid vector(s) -> coefficient space.

    Row k of the evaluation matrix is (1, cos x_k, .., sin x_k, ..); this
    computes its transpose applied to `values`, again in O(m log m).
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[-1]
    if m < 2 * half_degree + 1:
        raise GridTooSmall(f"need m >= {2 * half_degree + 1}, got {m}")
    spec = _czt(values.astype(np.complex128), -1)
    out = np.empty(values.shape[:-1] + (2 * half_degree + 1,), dtype=float)
    out[..., 0] = spec[..., 0].real
    if half_degree:
        out[..., 1 : half_degree + 1] = spec[..., 1 : half_degree + 1].real
        out[..., half_degree + 1 :] = -spec[..., 1 : half_degree + 1].imag
    return out


def to_grid(p: TrigPoly, grid: Grid) -> np.ndarray:
    """Values of p at the grid nodes, matching trig_eval to roundoff."""
    if grid.m < 2 * p.degree + 1:
        raise GridTooSmall(
            f"degree {p.degree} needs at least {2 * p.degree + 1} points, got {grid.m}"
        )
    return eval_packed(p.packed(), grid.m)


def from_grid(values: np.ndarray, target_degree: int) -> TrigPoly:
    """The unique degree-`target_degree` polynomial matching the samples.

    The grid must have m >= 2*target_degree+1 points; when the samples come
    from a higher-degree polynomial this is the orthogonal projection onto
    the degree-`target_degree` space under the sampled inner product.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise DimensionMismatch("expected a single grid vector")
    m = values.shape[0]
    if m % 2 == 0 or m < 2 * target_degree + 1:
        raise DimensionMismatch(
            f"grid size {m} cannot determine a degree-{target_degree} polynomial"
        )
    coeffs = adjoint_packed(values, target_degree)
    coeffs[0] /= m
    coeffs[1:] *= 2.0 / m
    return TrigPoly.from_packed(coeffs)


def inner(p_values: np.ndarray, q_values: np.ndarray) -> float:
    """Sampled inner product (1/m) sum p(x_k) q(x_k)."""
    p_values = np.asarray(p_values, dtype=float)
    q_values = np.asarray(q_values, dtype=float)
    if p_values.shape != q_values.shape or p_values.ndim != 1:
        raise DimensionMismatch("grid vectors must have equal length")
    return float(p_values @ q_values) / p_values.shape[0]


def grid_norm_sq(values: np.ndarray) -> float:
    """<v, v> under the sampled inner product."""
    return inner(values, values)

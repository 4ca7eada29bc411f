"""Real trigonometric polynomials in the coefficient basis.

A degree-n polynomial is

    p(t) = a0 + sum_{k=1..n} (ac[k-1] * cos(k t) + as[k-1] * sin(k t)),

stored as 2n+1 float coefficients.  Values are immutable after construction
(the arrays are locked) so they can be shared freely across threads.

Solver entry points require an even degree; the value type itself allows any
nonnegative degree because factor columns have degree n/2, which may be odd.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeMismatch


def _locked(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TrigPoly:
    degree: int
    a0: float
    acos: np.ndarray = field(repr=False)
    asin: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeMismatch("degree must be nonnegative")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "acos", _locked(self.acos))
        object.__setattr__(self, "asin", _locked(self.asin))
        if len(self.acos) != self.degree or len(self.asin) != self.degree:
            raise DegreeMismatch(
                f"need {self.degree} cosine and sine coefficients each"
            )

    @staticmethod
    def constant(value: float, degree: int = 0) -> "TrigPoly":
        return TrigPoly(degree, value, np.zeros(degree), np.zeros(degree))

    @staticmethod
    def from_packed(packed) -> "TrigPoly":
        """Inverse of packed(): [a0, cos block, sin block]."""
        packed = np.asarray(packed, dtype=float)
        if packed.ndim != 1 or packed.size % 2 != 1:
            raise DegreeMismatch("packed coefficients must have odd length")
        n = packed.size // 2
        return TrigPoly(n, packed[0], packed[1 : n + 1], packed[n + 1 :])

    def packed(self) -> np.ndarray:
        """Coefficients as one array [a0, ac_1..ac_n, as_1..as_n]."""
        return np.concatenate(([self.a0], self.acos, self.asin))

    def padded(self, degree: int) -> "TrigPoly":
        """Same polynomial re-tagged with a larger degree."""
        if degree < self.degree:
            raise DegreeMismatch("cannot pad to a smaller degree")
        extra = degree - self.degree
        return TrigPoly(
            degree,
            self.a0,
            np.concatenate((self.acos, np.zeros(extra))),
            np.concatenate((self.asin, np.zeros(extra))),
        )

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        n = max(self.degree, other.degree)
        a, b = self.padded(n), other.padded(n)
        return TrigPoly(n, a.a0 + b.a0, a.acos + b.acos, a.asin + b.asin)

    def scaled(self, c: float) -> "TrigPoly":
        return TrigPoly(self.degree, c * self.a0, c * self.acos, c * self.asin)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + other.scaled(-1.0)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "a0": self.a0,
            "cos": list(map(float, self.acos)),
            "sin": list(map(float, self.asin)),
        }

    @staticmethod
    def from_json(obj: dict) -> "TrigPoly":
        return TrigPoly(
            int(obj["degree"]),
            float(obj["a0"]),
            np.array(obj["cos"], dtype=float),
            np.array(obj["sin"], dtype=float),
        )


def trig_eval(p: TrigPoly, t) -> float | np.ndarray:
    """Pointwise value by direct summation, O(n) per point.

    This is the slow reference used to validate the transform path.
    """
    t = np.asarray(t, dtype=float)
    k = np.arange(1, p.degree + 1)
    kt = np.multiply.outer(t, k)
    val = p.a0 + np.cos(kt) @ p.acos + np.sin(kt) @ p.asin
    return float(val) if val.ndim == 0 else val


def trig_eval_chunked(p: TrigPoly, t: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """trig_eval for large degree/point counts without forming an n-by-len(t) matrix."""
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, p.a0)
    for start in range(0, p.degree, chunk):
        k = np.arange(start + 1, min(start + chunk, p.degree) + 1)
        kt = np.multiply.outer(t, k)
        out += np.cos(kt) @ p.acos[k - 1] + np.sin(kt) @ p.asin[k - 1]
    return out


def trig_to_rational(p: TrigPoly) -> np.ndarray:
    """Numerator of p under the half-tangent substitution, over (1+x^2)^n.

    With x = tan(t/2), cos t = (1-x^2)/(1+x^2) and sin t = 2x/(1+x^2); the
    returned ascending coefficient array N satisfies

        p(t(x)) * (1 + x^2)^n == N(x)   for all real x,

    with n = p.degree.  Nonnegativity of p on the circle is equivalent to
    nonnegativity of N on the line, up to the boundary point t = pi which the
    substitution only reaches in the limit |x| -> inf.
    """
    n = p.degree
    den = np.array([1.0, 0.0, 1.0])  # 1 + x^2
    den_pow = [np.array([1.0])]
    for _ in range(n):
        den_pow.append(np.convolve(den_pow[-1], den))

    def _acc(total, term):
        out = np.zeros(max(len(total), len(term)))
        out[: len(total)] += total
        out[: len(term)] += term
        return out

    # C_k = cos(kt)*(1+x^2)^k and S_k = sin(kt)*(1+x^2)^k as polynomials,
    # via the angle-addition recurrence X_{k+1} = 2*c*X_k - den^2 * X_{k-1}.
    c_num = np.array([1.0, 0.0, -1.0])  # 1 - x^2
    s_num = np.array([0.0, 2.0])        # 2x
    den2 = np.convolve(den, den)
    C = [np.array([1.0]), c_num]
    S = [np.array([0.0]), s_num]
    for _ in range(2, n + 1):
        C.append(_acc(np.convolve(2 * c_num, C[-1]), -np.convolve(den2, C[-2])))
        S.append(_acc(np.convolve(2 * c_num, S[-1]), -np.convolve(den2, S[-2])))
    out = np.zeros(2 * n + 1)
    out = _acc(out, p.a0 * den_pow[n])
    for k in range(1, n + 1):
        lift = den_pow[n - k]
        if p.acos[k - 1] != 0.0:
            out = _acc(out, p.acos[k - 1] * np.convolve(C[k], lift))
        if p.asin[k - 1] != 0.0:
            out = _acc(out, p.asin[k - 1] * np.convolve(S[k], lift))
    return out[: 2 * n + 1]

"""Homogeneous bivariate forms over the rationals.

A ``BinaryForm`` of degree d stores d+1 exact coefficients; entry j multiplies
x1^j * x2^(d-j).  The degree tag is explicit and never inferred from trailing
zeros, because the algebra layer maps between fixed graded pieces.  All
operations are pure and values are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import ratpoly as rp
from .errors import BothZero, DegreeMismatch, NotDivisible


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class BinaryForm:
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeMismatch("degree must be nonnegative")
        if len(self.coeffs) != self.degree + 1:
            raise DegreeMismatch(
                f"expected {self.degree + 1} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(
            self, "coeffs", tuple(_to_fraction(c) for c in self.coeffs)
        )

    @staticmethod
    def zero(degree: int) -> "BinaryForm":
        return BinaryForm(degree, (Fraction(0),) * (degree + 1))

    @staticmethod
    def constant(value) -> "BinaryForm":
        return BinaryForm(0, (value,))

    @staticmethod
    def x1() -> "BinaryForm":
        return BinaryForm(1, (0, 1))

    @staticmethod
    def x2() -> "BinaryForm":
        return BinaryForm(1, (1, 0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 1

    def evaluate(self, a, b):
        """Value at the point (a, b); exact when a, b are rational."""
        d = self.degree
        total = Fraction(0) if isinstance(a, (int, Fraction)) else 0.0
        pa = [1]
        for _ in range(d):
            pa.append(pa[-1] * a)
        pb = [1]
        for _ in range(d):
            pb.append(pb[-1] * b)
        for j, c in enumerate(self.coeffs):
            if c != 0:
                total += c * pa[j] * pb[d - j]
        return total

    def scaled(self, c) -> "BinaryForm":
        c = _to_fraction(c)
        return BinaryForm(self.degree, tuple(ci * c for ci in self.coeffs))

    def __neg__(self) -> "BinaryForm":
        return self.scaled(-1)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add forms of different degrees")
        return BinaryForm(
            self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @staticmethod
    def from_json(obj: dict) -> "BinaryForm":
        return BinaryForm(
            int(obj["degree"]), tuple(Fraction(c) for c in obj["coeffs"])
        )


@dataclass(frozen=True)
class FormPair:
    """A pair (u1, u2) of binary forms of equal degree."""

    u1: BinaryForm
    u2: BinaryForm

    def __post_init__(self):
        if self.u1.degree != self.u2.degree:
            raise DegreeMismatch("pair members must share one degree")

    @property
    def degree(self) -> int:
        return self.u1.degree

    def is_zero(self) -> bool:
        return self.u1.is_zero() and self.u2.is_zero()

    def rotate(self) -> "FormPair":
        """The companion pair (u2, -u1); its square sum equals this pair's."""
        return FormPair(self.u2, -self.u1)

    def scaled(self, c) -> "FormPair":
        return FormPair(self.u1.scaled(c), self.u2.scaled(c))

    def to_json(self) -> dict:
        return {"u1": self.u1.to_json(), "u2": self.u2.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "FormPair":
        return FormPair(BinaryForm.from_json(obj["u1"]), BinaryForm.from_json(obj["u2"]))


def bf_mul(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """Product of forms; degree adds, coefficients convolve exactly."""
    d = a.degree + b.degree
    out = [Fraction(0)] * (d + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coeffs):
            if cb != 0:
                out[i + j] += ca * cb
    return BinaryForm(d, tuple(out))


def bf_dehomogenize(a: BinaryForm):
    """Split a = x2^k * H(p) with p univariate and H the degree-(d-k) homogenization.

    Returns (p, k) where p(x) = a(x, 1) and k is the multiplicity of x2 in a;
    the zero form returns ([], 0).  The reconstruction
    a(x1, x2) = x2^k * x2^(d-k-deg p) * p(x1/x2) * x2^(deg p) holds exactly.
    """
    p = rp.trim(list(a.coeffs))
    if not p:
        return [], 0
    return p, a.degree - rp.degree(p)


def bf_homogenize(p, degree: int) -> BinaryForm:
    """Binary form of the given degree whose x2=1 slice is p (pads with x2 powers)."""
    p = rp.trim(list(p))
    if rp.degree(p) > degree:
        raise DegreeMismatch("polynomial degree exceeds target form degree")
    out = [Fraction(0)] * (degree + 1)
    for j, c in enumerate(p):
        out[j] = _to_fraction(c)
    return BinaryForm(degree, tuple(out))


def bf_divexact(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """Exact quotient a / b; raises NotDivisible on any remainder."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if a.is_zero():
        if b.degree > a.degree:
            raise NotDivisible("degree of divisor exceeds degree of dividend")
        return BinaryForm.zero(a.degree - b.degree)
    pa, ka = bf_dehomogenize(a)
    pb, kb = bf_dehomogenize(b)
    if kb > ka or b.degree > a.degree:
        raise NotDivisible("x2 multiplicity or degree of divisor too large")
    quot = rp.divexact(pa, pb)  # raises NotDivisible on nonzero remainder
    out = bf_homogenize(quot, a.degree - b.degree - (ka - kb))
    return _shift_x2(out, ka - kb)


def _shift_x2(a: BinaryForm, k: int) -> BinaryForm:
    """Multiply by x2^k (raises the degree tag by k)."""
    if k == 0:
        return a
    return BinaryForm(a.degree + k, tuple(a.coeffs) + (Fraction(0),) * k)


def bf_monic(a: BinaryForm) -> BinaryForm:
    """Normalize so the highest x1-power coefficient equals 1."""
    p, _ = bf_dehomogenize(a)
    if not p:
        return a
    return a.scaled(1 / p[-1])


def bf_gcd(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """Monic-normalized gcd via x2-multiplicity split plus univariate Euclid."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd of two zero forms")
    if a.is_zero():
        return bf_monic(b)
    if b.is_zero():
        return bf_monic(a)
    pa, ka = bf_dehomogenize(a)
    pb, kb = bf_dehomogenize(b)
    g = rp.gcd(pa, pb)
    k = min(ka, kb)
    return _shift_x2(bf_homogenize(g, rp.degree(g)), k)


def bf_shear(a: BinaryForm, c) -> BinaryForm:
    """Substitute x2 -> c*x1 + x2; invertible with parameter -c, degree preserved."""
    c = _to_fraction(c)
    d = a.degree
    out = [Fraction(0)] * (d + 1)
    for j, cj in enumerate(a.coeffs):
        if cj == 0:
            continue
        # x1^j (c x1 + x2)^(d-j)
        term = Fraction(1)
        for t in range(d - j + 1):
            out[j + t] += cj * math.comb(d - j, t) * c**t
    return BinaryForm(d, tuple(out))


def bf_from_floats(degree: int, coeffs) -> BinaryForm:
    """Form with dyadic coefficients equal to the given floats, exactly."""
    return BinaryForm(degree, tuple(Fraction(float(c)) for c in coeffs))


def bf_values(a: BinaryForm, x1s, x2s):
    """Float values of the form at arrays of points (vectorized, for testing/verify)."""
    import numpy as np

    x1s = np.asarray(x1s, dtype=float)
    x2s = np.asarray(x2s, dtype=float)
    d = a.degree
    out = np.zeros_like(x1s)
    # Horner in x1 with outer x2 powers: sum_j c_j x1^j x2^(d-j)
    for j in range(d, -1, -1):
        out = out * x1s
        cj = a.coeffs[j]
        if cj != 0:
            out = out + float(cj) * x2s ** (d - j)
    return out


def pair_dot(a: FormPair, b: FormPair) -> BinaryForm:
    """The bilinear combination a1*b1 + a2*b2."""
    return bf_mul(a.u1, b.u1) + bf_mul(a.u2, b.u2)


def square_sum(a: FormPair) -> BinaryForm:
    """u1^2 + u2^2."""
    return pair_dot(a, a)

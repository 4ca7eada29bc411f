import numpy as np
import pytest
from fractions import Fraction

from sospoly.binforms import BinaryForm, FormPair, bf_gcd, bf_mul
from sospoly.trigpoly import TrigPoly


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_form(rng, degree, scale=4):
    return BinaryForm(
        degree, tuple(Fraction(int(c)) for c in rng.integers(-scale, scale + 1, degree + 1))
    )


def rand_nonzero_form(rng, degree, scale=4):
    while True:
        f = rand_form(rng, degree, scale)
        if not f.is_zero():
            return f


def rand_coprime_pair(rng, degree, scale=4):
    while True:
        a = rand_form(rng, degree, scale)
        b = rand_form(rng, degree, scale)
        if a.is_zero() and b.is_zero():
            continue
        if bf_gcd(a, b).degree == 0:
            return FormPair(a, b)


def rand_square_list(rng, degree, count=2, scale=4):
    """Random squares with a nonzero sum, plus the summed form."""
    while True:
        squares = [rand_form(rng, degree, scale) for _ in range(count)]
        total = BinaryForm.zero(2 * degree)
        for s in squares:
            total = total + bf_mul(s, s)
        if not total.is_zero():
            return squares, total


def rand_trig(rng, degree, scale=1.0):
    return TrigPoly(
        degree,
        scale * rng.standard_normal(),
        scale * rng.standard_normal(degree),
        scale * rng.standard_normal(degree),
    )

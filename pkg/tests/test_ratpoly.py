from fractions import Fraction as F

import pytest

from sospoly import ratpoly as rp
from sospoly.errors import BothZero, NotDivisible


def test_divmod_reconstructs():
    p = rp.from_ints(1, 0, -3, 2, 5)
    q = rp.from_ints(-1, 2)
    quot, rem = rp.divmod_exact(p, q)
    assert rp.add(rp.mul(quot, q), rem) == p
    assert rp.degree(rem) < rp.degree(q)


def test_divexact_raises_on_remainder():
    with pytest.raises(NotDivisible):
        rp.divexact(rp.from_ints(1, 1), rp.from_ints(0, 1))


def test_gcd_euclid():
    # gcd(x^2 - 1, x^2 - x) = x - 1
    assert rp.gcd(rp.from_ints(-1, 0, 1), rp.from_ints(0, -1, 1)) == rp.from_ints(-1, 1)
    with pytest.raises(BothZero):
        rp.gcd([], [])


def test_xgcd_identity():
    p = rp.from_ints(2, 0, 1, 3)
    q = rp.from_ints(-1, 4, 1)
    g, a, b = rp.xgcd(p, q)
    assert rp.add(rp.mul(a, p), rp.mul(b, q)) == g
    assert g[-1] == 1  # monic


def test_squarefree_decomposition():
    # x^2 (x+1)^3 (x^2+1)
    p = rp.mul(rp.mul(rp.power(rp.from_ints(0, 1), 2), rp.power(rp.from_ints(1, 1), 3)), rp.from_ints(1, 0, 1))
    parts = rp.squarefree_decomposition(p)
    rebuilt = [F(1)]
    for f, mult in parts:
        rebuilt = rp.mul(rebuilt, rp.power(f, mult))
    assert rp.monic(rebuilt) == rp.monic(p)
    assert sorted(m for _, m in parts) == [1, 2, 3]

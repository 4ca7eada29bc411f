"""Dense univariate polynomials with exact rational coefficients.

A polynomial is a list of ``Fraction`` coefficients in ascending order with
trailing zeros trimmed; the zero polynomial is the empty list.  These helpers
back the exact binary-form algebra and the certificate construction, where
floating point is not acceptable.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BothZero, NotDivisible

Poly = list  # list[Fraction], ascending coefficients


def trim(p):
    """Drop trailing zero coefficients."""
    end = len(p)
    while end > 0 and p[end - 1] == 0:
        end -= 1
    return list(p[:end])


def from_ints(*coeffs) -> Poly:
    return trim([Fraction(c) for c in coeffs])


def degree(p) -> int:
    """Degree of p; the zero polynomial has degree -1."""
    return len(p) - 1


def is_zero(p) -> bool:
    return len(p) == 0


def add(p, q) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def sub(p, q) -> Poly:
    return add(p, [-c for c in q])


def scale(p, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return []
    return [ci * c for ci in p]


def mul(p, q) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_exact(p, q):
    """Quotient and remainder of p by q over the rationals."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = degree(q)
    lead = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    for i in range(len(p) - 1, dq - 1, -1):
        if r[i] == 0:
            continue
        c = r[i] / lead
        quot[i - dq] = c
        for j, b in enumerate(q):
            r[i - dq + j] -= c * b
    return trim(quot), trim(r)


def divexact(p, q) -> Poly:
    quot, rem = divmod_exact(p, q)
    if rem:
        raise NotDivisible("remainder is nonzero")
    return quot


def rem(p, q) -> Poly:
    return divmod_exact(p, q)[1]


def monic(p) -> Poly:
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p, q) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if not p and not q:
        raise BothZero("gcd(0, 0) undefined")
    a, b = trim(p), trim(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(p, q):
    """Extended Euclid: (g, a, b) monic with a*p + b*q = g."""
    a0, a1 = trim(p), trim(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while a1:
        quot, r = divmod_exact(a0, a1)
        a0, a1 = a1, r
        s0, s1 = s1, sub(s0, mul(quot, s1))
        t0, t1 = t1, sub(t0, mul(quot, t1))
    if not a0:
        raise BothZero("xgcd(0, 0) undefined")
    lead = a0[-1]
    return monic(a0), [c / lead for c in s0], [c / lead for c in t0]


def evaluate(p, x):
    acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p) -> Poly:
    return trim([c * i for i, c in enumerate(p)][1:])


def power(p, k: int) -> Poly:
    out = [Fraction(1)]
    for _ in range(k):
        out = mul(out, p)
    return out


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor, multiplicity) with p = lead * prod f_i^m_i.

    Factors are monic, squarefree, and pairwise coprime.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    p = monic(p)
    out = []
    g = gcd(p, derivative(p))
    w = divexact(p, g)
    i = 1
    while degree(w) > 0:
        y = gcd(w, g)
        f = divexact(w, y)
        if degree(f) > 0:
            out.append((monic(f), i))
        w, g = y, divexact(g, y)
        i += 1
    return out

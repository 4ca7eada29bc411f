"""Exact algebra for optimality certificates of the factorization objective.

The pieces, in dependency order:

* ``bezout_solve``   -- u1*v1 + u2*v2 = target, exact over the rationals.
* ``split_gcd``      -- u = (u1' g h, u2' g h) with u' coprime, g coprime to
                        u1'^2 + u2'^2, and every root of h shared with it.
* ``sqrt_mod``       -- t with t^2 = a modulo g, built from series expansions
                        of sqrt(a) at the roots of g (the one floating-point
                        step, with an optional high-precision mode).
* ``sos_multiplier`` -- sum-of-squares s with p = s*q modulo g.
* ``certificate_build`` / ``certificate_verify`` -- the (lambda, Q, eta)
  witness whose identity forces the objective to vanish at any second-order
  critical point, together with its per-term residual ledger.

Everything except ``sqrt_mod`` and the quadratic factorization of h is exact
rational arithmetic.  Degrees are capped: this module is desk-scale proof
machinery, not the production solver.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ratpoly as rp
from .binforms import (
    BinaryForm,
    FormPair,
    bf_dehomogenize,
    bf_divexact,
    bf_gcd,
    bf_homogenize,
    bf_mul,
    bf_shear,
    pair_dot,
    square_sum,
)
from .errors import (
    BothZero,
    DegreeMismatch,
    DegreeTooLarge,
    HFactorFailure,
    NegativeAtRealRoot,
    NotCoprime,
    ShapeMismatch,
)

DEGREE_CAP = 16


# ---------------------------------------------------------------------------
# exact linear algebra


def _solve_exact(rows, rhs):
    """One exact solution of A x = b over the rationals, free variables zero.

    Returns None when the system is inconsistent.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return x


def bezout_solve(
    u1: BinaryForm, u2: BinaryForm, target: BinaryForm, v_degree: int
) -> FormPair:
    """Solve u1*v1 + u2*v2 = target exactly with deg v_i = v_degree.

    The system is the Sylvester-structured map (v1, v2) -> u1 v1 + u2 v2
    between graded pieces; it is onto exactly when u1, u2 are coprime.  Free
    variables (present when v_degree exceeds deg(u1) - 1) are set to zero;
    adding any multiple of (u2, -u1) to the result stays a solution.
    """
    if u1.degree != u2.degree:
        raise DegreeMismatch("u1 and u2 must have equal degrees")
    d1 = u1.degree
    if v_degree < d1 - 1:
        raise DegreeMismatch(f"v_degree must be at least {d1 - 1}")
    if target.degree != d1 + v_degree:
        raise DegreeMismatch(
            f"target degree must be {d1 + v_degree}, got {target.degree}"
        )
    if u1.is_zero() and u2.is_zero():
        raise BothZero("both inputs are zero")
    if bf_gcd(u1, u2).degree > 0:
        raise NotCoprime("inputs share a nonconstant factor")

    ncols = 2 * (v_degree + 1)
    nrows = d1 + v_degree + 1
    cols = []
    for u in (u1, u2):
        for j in range(v_degree + 1):
            # u * x1^j x2^(v_degree - j)
            col = [Fraction(0)] * nrows
            for i, cu in enumerate(u.coeffs):
                col[i + j] += cu
            cols.append(col)
    rows = [[cols[c][i] for c in range(ncols)] for i in range(nrows)]
    x = _solve_exact(rows, list(target.coeffs))
    if x is None:
        raise NotCoprime("linear system inconsistent")
    v1 = BinaryForm(v_degree, tuple(x[: v_degree + 1]))
    v2 = BinaryForm(v_degree, tuple(x[v_degree + 1 :]))
    return FormPair(v1, v2)


# ---------------------------------------------------------------------------
# gcd splitting


@dataclass(frozen=True)
class GcdSplit:
    """u1 = u1p*g*h and u2 = u2p*g*h with the root partition of the gcd."""

    u1p: BinaryForm
    u2p: BinaryForm
    g: BinaryForm
    h: BinaryForm

    @property
    def coprime_pair(self) -> FormPair:
        return FormPair(self.u1p, self.u2p)


def split_gcd(u: FormPair) -> GcdSplit:
    """Split the gcd of (u1, u2) by whether its roots divide u1'^2 + u2'^2.

    h collects, with their full multiplicity in the gcd, exactly the factors
    whose roots are shared with the square sum of the coprime parts; g keeps
    the rest.  Computed by gcd saturation, no root finding.
    """
    if u.is_zero():
        raise BothZero("cannot split the zero pair")
    gc = bf_gcd(u.u1, u.u2)
    u1p = bf_divexact(u.u1, gc)
    u2p = bf_divexact(u.u2, gc)
    s = square_sum(FormPair(u1p, u2p))
    h = BinaryForm.constant(1)
    rest = gc
    while rest.degree > 0:
        w = bf_gcd(rest, s)
        if w.degree == 0:
            break
        h = bf_mul(h, w)
        rest = bf_divexact(rest, w)
    g = rest
    split = GcdSplit(u1p=u1p, u2p=u2p, g=g, h=h)
    # exactness really is exact: fail loudly if the algebra went wrong
    gh = bf_mul(g, h)
    if bf_mul(u1p, gh) != u.u1 or bf_mul(u2p, gh) != u.u2:
        raise ArithmeticError("gcd split reconstruction failed")
    if h.degree % 2 != 0:
        raise ArithmeticError("h must have even degree")
    return split


# ---------------------------------------------------------------------------
# charts: degree-preserving dehomogenization and division with remainder


def _shear_parameter(forms) -> Fraction:
    """Integer shear c with F(1, c) != 0 for every given nonzero form."""
    c = 0
    while True:
        for sign in ((1,) if c == 0 else (1, -1)):
            cc = Fraction(sign * c)
            if all(f.is_zero() or f.evaluate(Fraction(1), cc) != 0 for f in forms):
                return cc
        c += 1


def form_divmod(F: BinaryForm, G: BinaryForm):
    """Quotient and remainder with F = Q*G + R exactly, taken in a chart
    where G keeps its degree.  R is the canonical representative whose chart
    polynomial has degree below deg G."""
    if G.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if F.degree < G.degree:
        raise DegreeMismatch("dividend degree below divisor degree")
    c = _shear_parameter([G])
    Fs = bf_shear(F, c)
    Gs = bf_shear(G, c)
    fp, _ = bf_dehomogenize(Fs)
    gp, _ = bf_dehomogenize(Gs)
    quot, remp = rp.divmod_exact(fp, gp)
    Q = bf_shear(bf_homogenize(quot, F.degree - G.degree), -c)
    R = bf_shear(bf_homogenize(remp, F.degree), -c)
    return Q, R


def bf_norm(a: BinaryForm) -> float:
    return math.sqrt(sum(float(c) * float(c) for c in a.coeffs))


# ---------------------------------------------------------------------------
# square roots modulo a polynomial


def _mpf_to_fraction(x) -> Fraction:
    import mpmath

    if isinstance(x, (int, float, Fraction)):
        return Fraction(x)
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = -man if sign else man
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << (-exp))


def _taylor_coeffs(poly, center, order, zero):
    """First `order` Taylor coefficients of poly at `center` (generic dtype)."""
    work = list(poly) + [zero] * max(0, order - len(poly))
    n = len(work)
    out = []
    for k in range(order):
        for j in range(n - 2, k - 1, -1):
            work[j] = work[j] + center * work[j + 1]
        out.append(work[k])
    return out


def _series_sqrt(alpha, order, sqrt_fn):
    tau = [sqrt_fn(alpha[0])]
    for k in range(1, order):
        acc = alpha[k]
        for i in range(1, k):
            acc = acc - tau[i] * tau[k - i]
        tau.append(acc / (2 * tau[0]))
    return tau


def sqrt_mod(a, g, dps: int | None = None):
    """Polynomial t with t^2 = a modulo g, as exact dyadic coefficients.

    `a` may have rational or float coefficients; `g` must be exact rational.
    Requires gcd(a, g) = 1 and a > 0 at every real root of g.  The expansion
    of sqrt(a) is matched at each root of g to its multiplicity (an exact
    squarefree decomposition supplies the multiplicities), then the matching
    conditions are solved as one Hermite interpolation system.

    With `dps` set, root finding and the solve run in mpmath at that many
    digits; the default is double precision.  deg(t) < deg(g); a degree-zero
    g returns the square root of the constant coefficient by convention.
    """
    g = rp.trim([Fraction(c) for c in g])
    if rp.is_zero(g):
        raise ZeroDivisionError("modulus must be nonzero")
    a_exact = all(not isinstance(c, float) for c in a)
    a_list = list(a)
    if rp.degree(g) == 0:
        a0 = float(a_list[0]) if a_list else 0.0
        if a0 < 0:
            raise NegativeAtRealRoot("constant term negative")
        return [Fraction(math.sqrt(a0))]
    if a_exact:
        a_frac = rp.trim([Fraction(c) for c in a_list])
        if rp.is_zero(a_frac) or rp.degree(rp.gcd(rp.rem(a_frac, g), g)) > 0:
            raise NotCoprime("a and g share a factor")
        a_num = [float(c) for c in a_frac]
    else:
        a_num = [float(c) for c in a_list]

    factors = rp.squarefree_decomposition(g)

    if dps is None:
        return _sqrt_mod_double(a_num, factors, rp.degree(g))
    return _sqrt_mod_mp(a_list, a_exact, factors, rp.degree(g), dps)


def _build_conditions(a_coeffs, factors, roots_of, sqrt_fn, to_c, eval_a):
    """Hermite matching data: (root, derivative order, target series value)."""
    conditions = []
    for f, mult in factors:
        for root in roots_of(f):
            root = to_c(root)
            im = float(abs(root.imag))
            re = abs(float(root.real))
            if im <= 1e-8 * (1.0 + re):
                x = root.real
                val = eval_a(x)
                if float(val.real if hasattr(val, "real") else val) <= 0:
                    raise NegativeAtRealRoot(
                        f"a({float(x):.6g}) <= 0 at a real root of g"
                    )
                alpha = _taylor_coeffs(list(a_coeffs), x, mult, to_c(0))
                tau = _series_sqrt(alpha, mult, sqrt_fn)
                for k in range(mult):
                    conditions.append((to_c(x), k, tau[k]))
            elif float(root.imag) > 0:
                alpha = _taylor_coeffs(list(a_coeffs), root, mult, to_c(0))
                tau = _series_sqrt(alpha, mult, sqrt_fn)
                for k in range(mult):
                    conditions.append((root, k, tau[k]))
                    conditions.append((root.conjugate(), k, tau[k].conjugate()))
    return conditions


def _sqrt_mod_double(a_num, factors, mdeg):
    conditions = _build_conditions(
        [complex(c) for c in a_num],
        factors,
        lambda f: np.roots([float(c) for c in reversed(f)]),
        lambda z: np.sqrt(complex(z)),
        complex,
        lambda z: complex(np.polyval(a_num[::-1], z)),
    )
    if len(conditions) != mdeg:
        raise HFactorFailure(
            f"expected {mdeg} interpolation conditions, built {len(conditions)}"
        )
    mat = np.zeros((mdeg, mdeg), dtype=complex)
    rhs = np.zeros(mdeg, dtype=complex)
    for i, (root, k, val) in enumerate(conditions):
        for j in range(k, mdeg):
            mat[i, j] = math.comb(j, k) * root ** (j - k)
        rhs[i] = val
    coeffs = np.linalg.solve(mat, rhs)
    return [Fraction(float(c.real)) for c in coeffs]


def _sqrt_mod_mp(a_list, a_exact, factors, mdeg, dps):
    import mpmath

    old_dps = mpmath.mp.dps
    mpmath.mp.dps = dps
    try:
        if a_exact:
            a_hp = [
                mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
                for c in a_list
            ]
        else:
            a_hp = [mpmath.mpf(float(c)) for c in a_list]
        conditions = _build_conditions(
            a_hp,
            factors,
            lambda f: mpmath.polyroots(
                [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f)],
                maxsteps=200,
                extraprec=80,
            ),
            mpmath.sqrt,
            mpmath.mpc,
            lambda z: mpmath.polyval(list(reversed(a_hp)), z),
        )
        if len(conditions) != mdeg:
            raise HFactorFailure(
                f"expected {mdeg} interpolation conditions, built {len(conditions)}"
            )
        mat = mpmath.zeros(mdeg, mdeg)
        rhs = mpmath.matrix(mdeg, 1)
        for i, (root, k, val) in enumerate(conditions):
            for j in range(k, mdeg):
                mat[i, j] = math.comb(j, k) * root ** (j - k)
            rhs[i] = val
        sol = mpmath.lu_solve(mat, rhs)
        return [_mpf_to_fraction(mpmath.re(sol[i])) for i in range(mdeg)]
    finally:
        mpmath.mp.dps = old_dps


# ---------------------------------------------------------------------------
# sum-of-squares multiplier


def sos_multiplier(p_squares, q: BinaryForm, g: BinaryForm, dps: int | None = None):
    """Squares s_l with p = sum p_l^2 congruent to (sum s_l^2) * q modulo g.

    Each s_l lives in the degree-deg(g) graded piece.  The construction
    inverts q modulo g exactly, takes a square root of the inverse modulo g,
    and reduces t * p_l; only the square root is inexact.  Charts are chosen
    by an invertible shear so dehomogenization preserves deg(g).
    """
    p_squares = list(p_squares)
    if not p_squares:
        raise ShapeMismatch("need at least one square for p")
    if bf_gcd(q, g).degree > 0:
        raise NotCoprime("q and g share a nonconstant factor")
    M = g.degree
    if M == 0:
        # trivial modulus: any s works; keep p itself when the grading allows
        if q.is_one() and all(pl.degree == 0 for pl in p_squares):
            return p_squares
        return [BinaryForm.zero(0)]
    p_total = p_squares[0]
    p_form = BinaryForm.zero(2 * p_squares[0].degree)
    for pl in p_squares:
        if pl.degree != p_squares[0].degree:
            raise DegreeMismatch("all squares of p must share one degree")
        p_form = p_form + bf_mul(pl, pl)
    if p_form.is_zero():
        return [BinaryForm.zero(M)]

    c = _shear_parameter([g, q, p_form])
    gp, _ = bf_dehomogenize(bf_shear(g, c))
    qp, _ = bf_dehomogenize(bf_shear(q, c))
    qred = rp.rem(qp, gp)
    g0, a, _ = rp.xgcd(qred, gp)
    if rp.degree(g0) > 0:
        raise NotCoprime("q is not invertible modulo g")
    t = sqrt_mod(a, gp, dps=dps)

    out = []
    for pl in p_squares:
        plp, _ = bf_dehomogenize(bf_shear(pl, c))
        sl = rp.rem(rp.mul(t, plp), gp)
        out.append(bf_shear(bf_homogenize(sl, M), -c))
    return out


# ---------------------------------------------------------------------------
# certificate


def _x1_power(k: int) -> BinaryForm:
    return BinaryForm(k, (0,) * k + (1,))


def _quadratic_factors(h: BinaryForm, dps: int = 50):
    """h as a product of real quadratic forms, pairing conjugate roots.

    Requires h without real roots (guaranteed by split_gcd); multiplicities
    come from an exact squarefree decomposition, so only the root values are
    floating point.  Roots are taken at `dps` digits because the certificate
    identity amplifies any defect in these factors by the eta weight tower;
    the resulting coefficients are stored exactly.
    """
    import mpmath

    k = h.degree
    if k == 0:
        return []
    if h.evaluate(1, 0) == 0:
        raise HFactorFailure("h vanishes at (1, 0); it should have no real roots")
    hp, _ = bf_dehomogenize(h)
    pairs = []
    old_dps = mpmath.mp.dps
    mpmath.mp.dps = dps
    try:
        for f, mult in rp.squarefree_decomposition(hp):
            roots = mpmath.polyroots(
                [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f)],
                maxsteps=200,
                extraprec=100,
            )
            for root in roots:
                root = mpmath.mpc(root)
                re, im = root.real, root.imag
                if abs(im) <= 1e-7 * (1.0 + abs(re)):
                    raise HFactorFailure(f"near-real root {complex(root)!r} of h")
                if im > 0:
                    quad = BinaryForm(
                        2,
                        (
                            _mpf_to_fraction(re * re + im * im),
                            -2 * _mpf_to_fraction(re),
                            Fraction(1),
                        ),
                    )
                    pairs.extend([(float(re), float(im), quad)] * mult)
    finally:
        mpmath.mp.dps = old_dps
    if 2 * len(pairs) != k:
        raise HFactorFailure("conjugate pairing did not cover the degree of h")
    pairs.sort(key=lambda t: (t[0], t[1]))
    return [quad for _, _, quad in pairs]


@dataclass(frozen=True)
class Certificate:
    """Witness (lambda, Q, eta) plus the ledger of eta-weighted bound terms.

    Q is represented implicitly by its rank-one vectors: s_l times the
    rotation of the coprime part (weight 1), and the stored pairs v_forms[j]
    with weight eta^(3^j) / eta; it is positive semidefinite by construction
    as a sum of rank-one terms with nonnegative weights.  The stored pair j
    is the classical level-j vector divided by eta^(3^j / 2), which keeps
    its coefficients exact rational.
    """

    eta: float
    lam: FormPair
    s_factors: list
    b_forms: list
    v_forms: list
    r_factors: list
    residual_terms: list

    def to_json(self) -> dict:
        return {
            "eta": self.eta,
            "lambda": self.lam.to_json(),
            "s_factors": [f.to_json() for f in self.s_factors],
            "b_forms": [p.to_json() for p in self.b_forms],
            "v_forms": [p.to_json() for p in self.v_forms],
            "r_factors": [f.to_json() for f in self.r_factors],
            "residual_terms": list(map(float, self.residual_terms)),
            "inexact_fields": ["s_factors", "v_forms", "r_factors", "residual_terms"],
        }

    @staticmethod
    def from_json(obj: dict) -> "Certificate":
        return Certificate(
            eta=float(obj["eta"]),
            lam=FormPair.from_json(obj["lambda"]),
            s_factors=[BinaryForm.from_json(f) for f in obj["s_factors"]],
            b_forms=[FormPair.from_json(p) for p in obj["b_forms"]],
            v_forms=[FormPair.from_json(p) for p in obj["v_forms"]],
            r_factors=[BinaryForm.from_json(f) for f in obj["r_factors"]],
            residual_terms=list(map(float, obj["residual_terms"])),
        )


def certificate_build(
    u: FormPair, p_squares, eta, dps: int | None = None
) -> Certificate:
    """Construct the certificate for the pair u and the target p = sum p_l^2.

    Follows the gcd split: a sum-of-squares multiplier modulo g*x1^k, one
    balancing pair b^0 for the multiplier defect, and one pair b^j per
    quadratic factor of h, combined into the v^j vectors with the tower of
    weights eta_j = eta^(3^j).
    """
    if u.is_zero():
        raise BothZero("certificate needs a nonzero pair")
    if u.degree > DEGREE_CAP:
        raise DegreeTooLarge(f"degree {u.degree} exceeds cap {DEGREE_CAP}")
    eta_f = float(eta)
    if not eta_f > 0:
        raise ValueError("eta must be positive")
    p_squares = list(p_squares)
    for pl in p_squares:
        if pl.degree != u.degree:
            raise DegreeMismatch("squares of p must have the degree of u")

    split = split_gcd(u)
    g, h = split.g, split.h
    m, k = g.degree, h.degree
    d = u.degree
    dp = d - m - k
    upair = split.coprime_pair
    sig_up = square_sum(upair)

    # the identity multiplies the factor defect by up to eta^(3^(k/2+1) - 1),
    # so the root precision must outrun the weight tower
    amplification = (3 ** (k // 2 + 1) - 1) * math.log10(max(eta_f, 1.0))
    h_dps = min(max(50, dps or 0, 30 + math.ceil(amplification)), 600)
    r_factors = _quadratic_factors(h, dps=h_dps)
    modulus = bf_mul(g, _x1_power(k))
    s_factors = sos_multiplier(p_squares, sig_up, modulus, dps=dps)

    p_form = BinaryForm.zero(2 * d)
    for pl in p_squares:
        p_form = p_form + bf_mul(pl, pl)
    s_form = BinaryForm.zero(2 * (m + k))
    for sl in s_factors:
        s_form = s_form + bf_mul(sl, sl)

    # b^0 balances the multiplier defect: 2 g x1^k * <u', b0> = p - s*sigma(u')
    defect = p_form - bf_mul(s_form, sig_up)
    quot, _ = form_divmod(defect, modulus) if modulus.degree > 0 else (defect, None)
    b_forms = [bezout_solve(upair.u1, upair.u2, quot.scaled(Fraction(1, 2)), d)]

    # b^j peels one quadratic factor of h at a time
    prod_prev = BinaryForm.constant(1)
    sorted_quads = r_factors
    for j in range(1, k // 2 + 1):
        r_j = sorted_quads[j - 1]
        sig_over_r, _ = form_divmod(sig_up, r_j)
        target = bf_mul(
            bf_mul(g, _x1_power(k - 2 * j + 4)), bf_mul(sig_over_r, prod_prev)
        ).scaled(Fraction(-1, 2))
        b_forms.append(bezout_solve(upair.u1, upair.u2, target, d))
        prod_prev = bf_mul(prod_prev, r_j)

    # The classical certificate vectors carry irrational amplitudes
    # eta_j^(3/2) and eta_j^(-1/2); we store the rescaled pair
    #     w^j = eta_j * head^j + eta_j^(-1) * rot(b^j),
    # which equals eta_j^(-1/2) times the classical vector, and account for
    # the amplitude in the rank-one weight eta_j / eta of Q.  This keeps
    # every stored coefficient exact rational, so the certificate identity
    # survives the enormous weight tower without cancellation error.
    eta_frac = Fraction(eta_f)  # eta is treated as a double, exactly
    ubar = upair.rotate()
    v_forms = []
    prod = BinaryForm.constant(1)
    for j in range(0, k // 2 + 1):
        if j > 0:
            prod = bf_mul(prod, sorted_quads[j - 1])
        eta_j = eta_frac ** (3**j)
        head = bf_mul(bf_mul(g, _x1_power(k - 2 * j)), prod)
        bbar = b_forms[j].rotate()
        v_forms.append(
            FormPair(
                bf_mul(head, ubar.u1).scaled(eta_j) + bbar.u1.scaled(1 / eta_j),
                bf_mul(head, ubar.u2).scaled(eta_j) + bbar.u2.scaled(1 / eta_j),
            )
        )

    # lambda = -(1 + eta^-1 eta_{k/2+1}) u, exact
    lam_scale = -(1 + eta_frac ** (3 ** (k // 2 + 1) - 1))
    lam = FormPair(u.u1.scaled(lam_scale), u.u2.scaled(lam_scale))

    cert = Certificate(
        eta=eta_f,
        lam=lam,
        s_factors=s_factors,
        b_forms=b_forms,
        v_forms=v_forms,
        r_factors=r_factors,
        residual_terms=[],
    )
    report = certificate_verify(cert, u, p_form)
    return dataclasses.replace(cert, residual_terms=list(report.bound_terms))


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def circle_moment(a: int, b: int) -> Fraction:
    """Average of x1^a x2^b over the unit circle, exact."""
    if a % 2 or b % 2:
        return Fraction(0)
    return Fraction(
        _double_factorial(a - 1) * _double_factorial(b - 1), _double_factorial(a + b)
    )


def form_inner(F: BinaryForm, G: BinaryForm) -> Fraction:
    """The circle inner product of two forms of one degree, exact.

    Equals the sampled average over any M >= 2(deg F)+1 equispaced points by
    quadrature exactness; computing it in closed form keeps the certificate
    identity free of float cancellation under the eta weight tower.
    """
    if F.degree != G.degree:
        raise ShapeMismatch("inner product needs forms of equal degree")
    prod = bf_mul(F, G)
    D = prod.degree
    return sum(
        (c * circle_moment(j, D - j) for j, c in enumerate(prod.coeffs) if c != 0),
        Fraction(0),
    )


@dataclass(frozen=True)
class VerifyReport:
    identity_residual: float
    bound_terms: list
    lhs: float
    rhs: float
    objective_value: float


def certificate_verify(cert: Certificate, u: FormPair, p: BinaryForm) -> VerifyReport:
    """Evaluate both sides of the certificate identity in exact arithmetic.

    The left side contracts the gradient against lambda and the Hessian
    against the rank-one expansion of Q (the stored pairs with weights
    eta_j / eta, plus the s_l terms); the right side is minus the squared
    residual plus the eta-weighted ledger terms.  The nonzero residual
    reflects the floating-point steps of the construction (the square root
    modulo g and the quadratic factors of h), not evaluation roundoff.
    """
    d = u.degree
    if p.degree != 2 * d:
        raise ShapeMismatch("p must have twice the degree of u")
    if cert.lam.degree != d:
        raise ShapeMismatch("certificate was built for a different degree")
    eta = Fraction(float(cert.eta))

    e_form = square_sum(u) - p

    # gradient term <A_u(lambda), e>
    lhs = form_inner(pair_dot(u, cert.lam), e_form)

    # Q expanded into rank-one vectors: s_l * rot(u'), then the stored pairs
    split = split_gcd(u)
    ubar = split.coprime_pair.rotate()
    for sl in cert.s_factors:
        w = FormPair(bf_mul(sl, ubar.u1), bf_mul(sl, ubar.u2))
        auw = pair_dot(u, w)
        lhs += form_inner(square_sum(w), e_form) + 2 * form_inner(auw, auw)
    for j, w in enumerate(cert.v_forms):
        weight = eta ** (3**j) / eta
        auw = pair_dot(u, w)
        lhs += weight * (
            form_inner(square_sum(w), e_form) + 2 * form_inner(auw, auw)
        )

    # ledger side
    obj = form_inner(e_form, e_form)
    bound_terms_exact = []
    for j, bf in enumerate(cert.b_forms):
        eta_j = eta ** (3**j)
        bbar = bf.rotate()
        aubb = pair_dot(u, bbar)
        bound_terms_exact.append(
            (form_inner(square_sum(bf), e_form) + 2 * form_inner(aubb, aubb))
            / (eta * eta_j)
        )
    rhs = -obj + sum(bound_terms_exact)
    return VerifyReport(
        identity_residual=float(abs(lhs - rhs)),
        bound_terms=[float(t) for t in bound_terms_exact],
        lhs=float(lhs),
        rhs=float(rhs),
        objective_value=float(obj),
    )

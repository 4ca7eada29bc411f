"""Sum-of-squares decomposition of trigonometric polynomials.

A nonnegative trig polynomial p of even degree n is written as a sum of r
squares by minimizing the sampled least-squares objective over the factor
coefficients; the gradient costs O(r n log n) through fast transforms, and
second-order critical points of the objective are global for r >= 2, so a
local method recovers the decomposition.  An exact-arithmetic layer builds
and verifies the optimality certificates behind that guarantee, and
extensions cover projection onto the cone, nonnegativity on interval unions,
and linear coefficient constraints.
"""

from .binforms import (
    BinaryForm,
    FormPair,
    bf_dehomogenize,
    bf_divexact,
    bf_gcd,
    bf_mul,
    pair_dot,
    square_sum,
)
from .bench import BenchReport, InstanceSpec, gen_instance, run_bench
from .certificates import (
    Certificate,
    GcdSplit,
    bezout_solve,
    certificate_build,
    certificate_verify,
    form_inner,
    sos_multiplier,
    split_gcd,
    sqrt_mod,
)
from .errors import (
    BothZero,
    DegreeIncompatible,
    DegreeMismatch,
    DegreeTooLarge,
    DimensionMismatch,
    GridTooSmall,
    HFactorFailure,
    NegativeAtRealRoot,
    NonFiniteObjective,
    NotCoprime,
    NotDivisible,
    OddDegree,
    ShapeMismatch,
    SosPolyError,
    TooLargeForDense,
)
from .extensions import (
    IntervalSpec,
    LinearCoeffMap,
    interval_certify,
    project_sos,
    sosopt_feasible,
)
from .grid import Grid, from_grid, inner, to_grid, transform_calls
from .lbfgs import SolveTrace, TraceRow
from .solver import (
    FactorMatrix,
    SocpReport,
    SolverConfig,
    gradient,
    hess_quadform,
    lbfgs_minimize,
    objective,
    socp_check,
)
from .trigpoly import TrigPoly, trig_eval, trig_to_rational

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "FormPair",
    "TrigPoly",
    "Grid",
    "FactorMatrix",
    "SolverConfig",
    "SolveTrace",
    "TraceRow",
    "SocpReport",
    "Certificate",
    "GcdSplit",
    "InstanceSpec",
    "BenchReport",
    "IntervalSpec",
    "LinearCoeffMap",
    "bf_mul",
    "bf_divexact",
    "bf_gcd",
    "bf_dehomogenize",
    "pair_dot",
    "square_sum",
    "trig_eval",
    "trig_to_rational",
    "to_grid",
    "from_grid",
    "inner",
    "transform_calls",
    "objective",
    "gradient",
    "hess_quadform",
    "lbfgs_minimize",
    "socp_check",
    "bezout_solve",
    "split_gcd",
    "sqrt_mod",
    "sos_multiplier",
    "certificate_build",
    "certificate_verify",
    "form_inner",
    "project_sos",
    "interval_certify",
    "sosopt_feasible",
    "gen_instance",
    "run_bench",
    "SosPolyError",
    "DimensionMismatch",
    "DegreeMismatch",
    "ShapeMismatch",
    "GridTooSmall",
    "OddDegree",
    "NotDivisible",
    "NotCoprime",
    "BothZero",
    "NegativeAtRealRoot",
    "HFactorFailure",
    "DegreeTooLarge",
    "NonFiniteObjective",
    "TooLargeForDense",
    "DegreeIncompatible",
]

"""Exception types shared across the package."""


class SosPolyError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(SosPolyError, ValueError):
    """Vector/grid lengths do not agree."""


class DegreeMismatch(SosPolyError, ValueError):
    """Polynomial degrees incompatible with the requested operation."""


class ShapeMismatch(SosPolyError, ValueError):
    """Array or factor shapes incompatible."""


class GridTooSmall(SosPolyError, ValueError):
    """Grid has fewer points than needed to represent the polynomial."""


class OddDegree(SosPolyError, ValueError):
    """Operation requires an even trigonometric degree."""


class NotDivisible(SosPolyError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class NotCoprime(SosPolyError, ArithmeticError):
    """Inputs share a nonconstant common factor."""


class BothZero(SosPolyError, ValueError):
    """Both members of a polynomial pair are zero."""


class NegativeAtRealRoot(SosPolyError, ArithmeticError):
    """Square root modulo g undefined: argument not positive at a real root of g."""


class HFactorFailure(SosPolyError, ArithmeticError):
    """Could not pair complex roots into real quadratic factors."""


class DegreeTooLarge(SosPolyError, ValueError):
    """Input degree exceeds the cap for exact desk-scale algebra."""


class NonFiniteObjective(SosPolyError, FloatingPointError):
    """Objective or gradient evaluated to NaN/Inf; caller owns restart policy."""


class TooLargeForDense(SosPolyError, ValueError):
    """Problem too large for a dense eigensolve; request iterative mode."""


class DegreeIncompatible(SosPolyError, ValueError):
    """Multiplier degrees do not match the target polynomial degree."""


class LineSearchFailure(SosPolyError, RuntimeError):
    """Line search could not produce an acceptable step."""

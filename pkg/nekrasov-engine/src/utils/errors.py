"""Exception hierarchy for the engine."""


class EngineError(Exception):
    """Base class for all engine errors"""


class AlgebraError(EngineError):
    """Invalid operation in the exact kernel (division by zero, bad operands)"""


class ResonantDirectionError(AlgebraError):
    """A direction substitution made a denominator vanish identically"""

    def __init__(self, direction, message: str = ""):
        self.direction = tuple(direction)
        super().__init__(message or f"resonant direction {self.direction}")


class SeriesError(EngineError):
    """Invalid truncated series operation"""


class PartitionError(EngineError):
    """Invalid Young diagram or cell query"""


class SurfaceError(EngineError):
    """Unknown or unreadable toric surface"""


class SurfaceValidationError(SurfaceError):
    """A loaded surface violates one of its invariants"""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        text = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(text)


class CharacterError(EngineError):
    """The edge character is not a Laurent polynomial with nonnegative coefficients"""


class ClassEvaluationError(EngineError):
    """A multiplicative class could not be evaluated"""


class TheoryError(EngineError):
    """Unknown or malformed theory specification"""


class PerturbativeDomainError(EngineError):
    """A gamma-function argument lies outside the direct evaluation domain"""


class QuadratureError(EngineError):
    """Numerical quadrature failed to reach the requested accuracy"""


class SWCurveError(EngineError):
    """Degenerate Seiberg-Witten curve or failed period evaluation"""


class FitError(EngineError):
    """Prepotential fit failed or was ill conditioned"""

"""Exception types shared across the toolkit."""


class BornkitError(Exception):
    """Base class for every toolkit error."""


class ValidationError(BornkitError):
    """An object failed its construction-time invariants."""


class NotSquareError(ValidationError):
    pass


class NotHermitianError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class IncompleteSumError(ValidationError):
    """Measure elements do not sum to the identity."""


class LabelCollisionError(ValidationError):
    pass


class ZeroElementError(ValidationError):
    """A measure element is identically zero and can never respond."""


class CalibrationDataError(ValidationError):
    """Calibration rates are inconsistent with the calibration states."""


class DimensionMismatchError(BornkitError):
    pass


class EmptyStateError(BornkitError):
    """Operation requires positive intensity but the state is empty."""


class NegativeRateError(BornkitError):
    """A response rate is negative beyond rounding tolerance."""


class EmptyLogError(BornkitError):
    pass


class NotNormalError(BornkitError):
    """Operator does not commute with its adjoint."""


class NotNormalizedError(BornkitError):
    pass


class NotOrthonormalError(BornkitError):
    pass


class NotProjectorError(BornkitError):
    pass


class NotUnitaryError(BornkitError):
    pass


class RankDeficientError(BornkitError):
    """Calibration states do not span the space of Hermitian matrices."""


class InfeasibleError(BornkitError):
    """A constraint target lies outside the operator's spectral range."""


class NoConvergenceError(BornkitError):
    """Iteration cap reached before the exit tolerance was met."""


class ParseError(BornkitError):
    """Configuration file could not be parsed or violates the schema."""


class UnresolvedReferenceError(ParseError):
    """A task refers to an object that the configuration does not define."""

"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FHDetError(Exception):
    exit_code = 1


class ValidationError(FHDetError, ValueError):
    exit_code = 2


class SingularPointError(ValidationError):
    """A symbol was evaluated exactly at one of its singular points."""


class SeriesRangeError(ValidationError, IndexError):
    """A Fourier series is too short for the requested matrix."""


class DegenerateSymbolError(ValidationError):
    """Symbol (nearly) vanishes on the sample grid."""


class WindingError(ValidationError):
    """Nonzero or unresolved winding number."""


class UnsupportedPredictionError(FHDetError):
    exit_code = 3


class HypothesisError(FHDetError):
    exit_code = 4


class ConditioningError(FHDetError):
    exit_code = 5

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class AccuracyWarning(UserWarning):
    pass

"""Exception types raised across the package."""


class MvmdsError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(MvmdsError):
    """A matrix that must be square is not."""


class AsymmetryError(MvmdsError):
    """Asymmetry of a matrix exceeds the allowed tolerance."""


class NegativeEntryError(MvmdsError):
    """A dissimilarity entry is negative."""


class NonFiniteEntryError(MvmdsError):
    """A matrix contains NaN or infinite entries."""


class MaskShapeMismatchError(MvmdsError):
    """An observation mask does not match the shape of its matrix."""


class MaskValueError(MvmdsError):
    """An observation mask is not symmetric or not binary."""


class DimensionMismatchError(MvmdsError):
    """Operands have incompatible dimensions."""


class GammaBelowOneError(MvmdsError):
    """The weight controller gamma is below 1."""


class NegativeStressError(MvmdsError):
    """A per-view stress value is negative."""


class SingularUpdateError(MvmdsError):
    """The pseudoinverse needed by the configuration update failed."""


class EigenFailureError(MvmdsError):
    """A symmetric eigendecomposition did not converge."""


class AllPairsMissingError(MvmdsError):
    """No observed dissimilarity is available where one is required."""


class KOutOfRangeError(MvmdsError):
    """A count parameter is outside its valid range."""


class LengthMismatchError(MvmdsError):
    """Two sequences that must be aligned have different lengths."""


class WrongDimensionError(MvmdsError):
    """An embedding does not have the dimensionality the operation needs."""


class ParseError(MvmdsError):
    """A text input could not be parsed. Carries 1-based line/column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column

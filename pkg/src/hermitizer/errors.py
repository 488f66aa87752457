"""Exception hierarchy.

The CLI maps these onto exit codes: ``ValidationError`` -> 1,
``SchemaError`` -> 2, ``NumericalError`` -> 3.
"""


class HermitizerError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HermitizerError):
    pass


class NumericalError(HermitizerError):
    pass


class SchemaError(HermitizerError):
    """Malformed model file or report."""


class NotHermitian(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class TerminalNode(ValidationError):
    """A terminal lattice node (k = 0) has no diagonal successor."""


class LimitExceeded(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class IllConditioned(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class NotDiagonalizable(NumericalError):
    pass


class StepTooLarge(NumericalError):
    pass


class SingularPotential(NumericalError):
    pass

"""Exception types raised by geophase.

Input/validation problems derive from :class:`ValueError`; numerical
breakdowns (undefined phases, degenerate spectra) derive from
:class:`NumericalFailure` so callers can tell the two apart.
"""


class GeophaseError(Exception):
    """Base class for all library errors."""


class ValidationError(GeophaseError, ValueError):
    """An input violates a documented precondition."""


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class BlochNormExceeded(ValidationError):
    pass


class InvalidDensity(ValidationError):
    pass


class NumericalFailure(GeophaseError, ArithmeticError):
    """A quantity is undefined or cannot be computed reliably."""


class IndeterminatePhase(NumericalFailure):
    pass


class DegenerateSpectrum(NumericalFailure):
    pass


class DegenerateStep(NumericalFailure):
    pass


class IllConditionedFit(NumericalFailure):
    pass

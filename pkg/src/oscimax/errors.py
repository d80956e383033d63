"""Exception hierarchy.

``ValidationError`` subclasses map to CLI exit code 2, ``NumericBudgetError``
subclasses to exit code 3.
"""


class OscimaxError(Exception):
    pass


class ValidationError(OscimaxError, ValueError):
    pass


class NumericBudgetError(OscimaxError, RuntimeError):
    pass


class EmptyProfile(ValidationError):
    pass


class OverlappingBands(ValidationError):
    pass


class InvertedInterval(ValidationError):
    pass


class MissingDirection(ValidationError):
    pass


class InvalidTime(ValidationError):
    pass


class TooManyIntervals(ValidationError):
    pass


class NotInSet(ValidationError):
    pass


class SpecOutOfRange(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class DegenerateAbscissae(ValidationError):
    pass


class DegenerateLadder(ValidationError):
    pass


class InvalidExponents(ValidationError):
    pass


class PhaseCertificateFailed(ValidationError):
    """A witness point's total phase exceeds the small-phase threshold."""


class ToleranceNotReached(NumericBudgetError):
    pass

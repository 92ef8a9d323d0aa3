"""Exception hierarchy.

Every error raised on bad input derives from :class:`StackcoverError`, which is
itself a ``ValueError`` so callers that only care about "bad value" can catch
that.
"""


class StackcoverError(ValueError):
    pass


class ValidationError(StackcoverError):
    """Input data failed a structural or range check."""


class NegativeValuation(ValidationError):
    pass


class NonPositiveOmega(ValidationError):
    """A target's reward + cost is zero for one of the players."""


class TooFewTargets(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class InvalidMatrix(ValidationError):
    pass


class InvalidMarginals(ValidationError):
    pass


class PivotEqualsReference(ValidationError):
    pass


class InfeasibleIndifference(StackcoverError):
    """No marginal vector satisfies the indifference maps and the box [0, 1]."""


class ResolutionTooFine(StackcoverError):
    """The requested grid has more points than the configured cap."""

"""Exception types shared across the package."""


class RuledCountError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVectorError(RuledCountError):
    """A coordinate vector was identically zero where a point was required."""


class ZeroElementError(RuledCountError):
    """A ring element was zero where a nonzero one was required."""


class DimensionMismatchError(RuledCountError):
    """A vector had the wrong number of entries for the requested object."""


class DegenerateSpanError(RuledCountError):
    """Two spanning vectors were linearly dependent, so they define no line."""


class ResourceLimitError(RuledCountError):
    """An enumeration would visit more candidates than the configured ceiling."""


class InsufficientDataError(RuledCountError):
    """A statistical report was requested from too few data points."""


class ParseError(RuledCountError):
    """A point, element or object token could not be parsed."""

"""Exception types shared across the package."""


class TrendsegError(Exception):
    """Base class for all trendseg errors."""


class NonFiniteInput(TrendsegError):
    """Input contains NaN or infinite values."""


class SeriesTooShort(TrendsegError):
    """Series is shorter than the operation requires."""


class DegenerateWeights(TrendsegError):
    """Constancy/linearity weight triplets are (near-)parallel.

    This signals a corrupted working state: by construction the two weight
    triplets of a legal merge are linearly independent.
    """


class MaskLengthMismatch(TrendsegError):
    """Coefficient mask is not aligned with the decomposition records."""


class CapExceeded(TrendsegError):
    """Requested dense-matrix materialization above the configured cap."""


class IndexOutOfRange(TrendsegError):
    """Segment bounds fall outside the series."""


class LengthMismatch(TrendsegError):
    """Two series that must have equal length do not."""


class InvalidSpec(TrendsegError):
    """A signal specification violates its own declared change-points."""

"""Exception hierarchy shared by the library and the CLI.

Domain errors exit the CLI with code 1, format/IO errors with code 2.
"""


class CurvesmithError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CurvesmithError, ValueError):
    """Precondition violated: empty image, non-finite values, bad ranges."""


class EmptyDatasetError(CurvesmithError):
    """Dataset pairing produced zero raw/target pairs."""

    def __init__(self, message, unmatched_raw=(), unmatched_target=()):
        super().__init__(message)
        self.unmatched_raw = list(unmatched_raw)
        self.unmatched_target = list(unmatched_target)


class IllConditionedError(CurvesmithError):
    """Kernel matrix is not numerically positive definite at the given noise level."""

    def __init__(self, message, min_alpha=None):
        super().__init__(message)
        self.min_alpha = min_alpha


class InsufficientSamplesError(CurvesmithError):
    """Fewer samples than the statistic requires (covariance needs N >= 2)."""


class FormatError(CurvesmithError):
    """Binary file does not match the expected layout.

    `offset` is the byte position where validation failed, when known.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset

"""Exception hierarchy shared by all modules."""


class ConformanceError(Exception):
    """Base class for every error raised by this package."""


class InvalidNetError(ConformanceError):
    pass


class InvalidMarkingError(ConformanceError):
    pass


class NotEnabledError(ConformanceError):
    pass


class UnsupportedNetError(ConformanceError):
    """Raised when a net's reachability graph contains a cycle."""


class ExplosionError(ConformanceError):
    """A configured enumeration or search cap was exceeded.

    ``count`` holds the number of items (sequences, realizations, states)
    produced before giving up.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class UnreachableFinalMarkingError(ConformanceError):
    pass


class NotADagError(ConformanceError):
    pass


class InvalidDistributionError(ConformanceError):
    pass


class UnsupportedDistributionError(ConformanceError):
    pass


class InvalidAssignmentError(ConformanceError):
    pass


class IncompleteAssignmentError(ConformanceError):
    pass


class InvalidTraceError(ConformanceError):
    pass


class ParseError(ConformanceError):
    pass


class SchemaError(ParseError):
    """Well-formed input that violates the uncertainty schema."""


class PlayoutError(ConformanceError):
    pass


class InconsistencyError(ConformanceError):
    """Two independent computations that must agree did not."""

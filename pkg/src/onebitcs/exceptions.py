"""Exception types shared across the package."""


class ZeroSignalError(RuntimeError):
    """Raised when a solver terminates with an identically zero signal.

    The normalized output x / ||x|| is undefined in that case; callers that
    want a row anyway (e.g. the sweep runner) catch this and record a
    ``zero_signal`` termination.
    """


class LineSearchStallError(RuntimeError):
    """Backtracking exceeded its halving cap; treated as numerical failure."""


class UnsupportedSizeError(ValueError):
    """A diagnostic was requested on a problem above its size cap."""

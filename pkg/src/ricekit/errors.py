"""Exception hierarchy shared by all ricekit modules."""


class RicekitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RicekitError, ValueError):
    """Argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation was requested exactly at (or too close to) a pole."""


class PoleOverlapError(RicekitError, ValueError):
    """Two declared poles are too close for the requested contour radius."""


class AlphabetError(RicekitError, ValueError):
    """Operation restricted to binary alphabets got a larger one."""


class RangeError(RicekitError, ValueError):
    """Index outside the range the operation is conditioned for."""


class ConvergenceError(RicekitError, RuntimeError):
    """An iterative scheme did not meet its tolerance within its caps."""


class ToleranceError(ConvergenceError):
    """Requested tolerance is unreachable within the configured term cap."""


class TailBoundError(ConvergenceError):
    """A truncated integral/series tail could not be certified small enough."""


class DepthCapError(ConvergenceError):
    """Prefix-depth cap hit before the harmonic-sum tail bound was met."""

class SenslatError(Exception):
    """Base class for errors raised by this package."""


class ResourceLimitError(SenslatError):
    """A computation would exceed a configured size or probe cap."""


class PreconditionError(SenslatError, ValueError):
    """An input violates an operation's stated precondition."""


class NotSensitiveError(PreconditionError):
    """A block that was required to be sensitive is not."""


class NonTrivialityError(PreconditionError):
    """A coloring fails the red-origin / blue-on-every-axis condition."""

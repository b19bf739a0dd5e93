"""Shared exception types.

Invalid arguments raise the builtin ValueError and division by zero the
builtin ZeroDivisionError; only the cap-related failures get their own
class so callers can degrade to a "skipped" verdict instead of crashing.
"""


class ResourceLimitError(RuntimeError):
    """A configured cap (closure size, enumeration bound, ...) was exceeded.

    ``partial`` carries how far the computation got before it was aborted,
    so reports can state what was actually done.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

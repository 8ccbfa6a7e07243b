"""Exception types shared across the toolkit."""


class SyncertError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(SyncertError, ValueError):
    pass


class Unsupported(SyncertError, NotImplementedError):
    pass


class DomainViolation(SyncertError, ValueError):
    pass


class DivergenceError(SyncertError, RuntimeError):
    """Raised when integration produces a non-finite state.

    ``last_time`` is the last time at which the state was finite.
    """

    def __init__(self, message, last_time):
        super().__init__(message)
        self.last_time = last_time


class ConfigError(SyncertError, ValueError):
    """Schema or reference error in a scenario config; ``key`` names the offending path."""

    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key

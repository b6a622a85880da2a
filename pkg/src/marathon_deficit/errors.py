"""Exception types shared across the package."""


class DeficitError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(DeficitError):
    """Malformed input: bad CSV shape, bad duration string, bad numbers."""


class TrackError(DeficitError):
    """A GPS track violates an ordering or range requirement."""


class ProblemError(DeficitError):
    """A problem definition is internally inconsistent."""


class UnsolvableError(ProblemError):
    """The requested deficit exceeds what the capacities can ever save."""


class ConfigError(DeficitError):
    """A solver configuration value is out of range."""


class BackendError(DeficitError):
    """The requested compute backend is unavailable."""

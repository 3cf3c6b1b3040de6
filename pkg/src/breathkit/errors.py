"""Exception hierarchy shared by the library and the command line."""


class BreathkitError(Exception):
    """Base class for every error raised by breathkit."""


class InputValidationError(BreathkitError, ValueError):
    """A value object was built from data that breaks its invariants."""


class DomainError(BreathkitError, ValueError):
    """An argument lies outside the domain of a model function."""


class ConsistencyError(BreathkitError, ValueError):
    """Redundant inputs disagree (e.g. d_body != d_solid + d_void)."""


class ClassificationError(BreathkitError, ValueError):
    """No breathing regime exists for the given variation."""


class DegeneratePointError(BreathkitError, ZeroDivisionError):
    """A closed-form expression hits a zero denominator."""


class InsufficientDataError(BreathkitError, ValueError):
    pass


class DegeneratePolygonError(BreathkitError, ValueError):
    pass


class TessellationError(BreathkitError):
    """Raised when a tile fails to tessellate and the caller asked for it."""

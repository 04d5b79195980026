"""Exception hierarchy shared by every module."""


class UrnError(Exception):
    """Base class; ``kind`` is the machine-readable tag the CLI reports."""

    kind = "error"


class DomainError(UrnError, ValueError):
    kind = "domain"


class ConditioningError(UrnError):
    """Raised when conditioning on an event of probability zero."""

    kind = "conditioning"


class ParseError(UrnError, ValueError):
    kind = "parse"


class ValidationError(UrnError, ValueError):
    kind = "validation"

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class SaturationError(UrnError):
    """Rejection sampling hit ``max_attempts``; ``partial`` holds the tally so far."""

    kind = "saturation"

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial

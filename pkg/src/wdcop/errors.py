"""Exception types shared across the package."""


class WdcError(Exception):
    """Base class for all package errors."""


class DomainError(WdcError, ValueError):
    """A point or parameter lies outside its admissible range."""


class SelfMapViolation(WdcError, ValueError):
    """The proposed self-map leaves the closed unit disk."""

    code = "SELF_MAP_VIOLATION"


class WrongSpace(WdcError, ValueError):
    """A criterion was requested for a source space it does not apply to."""

    code = "WRONG_SPACE"


class ScenarioError(WdcError):
    """Scenario input could not be used.

    ``code`` is ``PARSE_ERROR`` or ``VALIDATION_ERROR``; ``location`` names the
    line/column or the JSON path of the offending field.
    """

    def __init__(self, code, location, message):
        self.code = code
        self.location = location
        self.message = message
        super().__init__(f"{code} at {location}: {message}")

"""Exception types shared across the package."""


class MzvError(Exception):
    """Base class for all errors raised by this package."""


class IndexParseError(MzvError, ValueError):
    """Malformed index text.  `position` is the 0-based column of the offense."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (column {position})")
        self.position = position


class AdmissibilityError(MzvError, ValueError):
    """An operation that needs a convergent index got a non-admissible one."""


class InvalidSpecError(MzvError, ValueError):
    """A nested-sum spec or evaluation request violates a structural constraint."""


class DivergentSeriesError(InvalidSpecError):
    """The requested nested sum does not converge; refused before summation."""


class PreconditionError(MzvError, ValueError):
    """Identity-checker parameters outside the identity's hypothesis."""


class ConfigError(MzvError, ValueError):
    """Malformed suite or CLI configuration."""

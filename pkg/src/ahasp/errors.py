"""Exception hierarchy shared across the package."""


class AhaspError(Exception):
    """Base class for all package errors."""


class InstanceError(AhaspError, ValueError):
    """An instance violates a structural rule or a position is out of range."""


class RepresentationError(AhaspError, ValueError):
    """A dual chain is malformed (duplicate, missing or misplaced task)."""


class ContractError(AhaspError, RuntimeError):
    """An operation was called outside its precondition."""


class ConfigError(AhaspError, ValueError):
    """Solver configuration out of range."""


class SizeLimitError(AhaspError, ValueError):
    """Instance too large for exhaustive enumeration."""


class PairingError(AhaspError, ValueError):
    """Two run records cannot be compared."""


class FormatError(AhaspError, ValueError):
    """An instance or solution document could not be parsed."""

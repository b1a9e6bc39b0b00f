"""Exception types shared across the package."""


class ApwordsError(Exception):
    """Base class for all package-specific errors."""


class AlphabetError(ApwordsError):
    """A symbol does not belong to the expected alphabet, or alphabets clash."""


class SpecParseError(ApwordsError):
    """A sequence-spec string failed to parse.

    Carries the byte offset of the failure in ``position``.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class SchemeError(ApwordsError):
    """A scheme description violates a structural requirement."""


class ResourceLimitError(ApwordsError):
    """A computation would exceed its declared resource ceiling."""


class FiniteOutputError(ApwordsError):
    """A derived sequence turned out to be finite; the read is past its end."""

    def __init__(self, produced):
        super().__init__(f"output exhausted after {produced} symbols")
        self.produced = produced


class InvariantViolation(ApwordsError):
    """A machine-checked invariant failed during a construction."""

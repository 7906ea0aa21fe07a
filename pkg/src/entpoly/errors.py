class InvalidInputError(ValueError):
    """Raised when an input violates a documented precondition."""


class UnsupportedMeasureError(InvalidInputError):
    """Raised when a measure cannot be evaluated on the given object."""

"""Shared exception types."""


class ModelError(ValueError):
    """A model violates a structural requirement (bad label, grading, ...)."""


class PreconditionError(ValueError):
    """An operation was invoked on input that fails its stated precondition."""


class InternalCheckError(AssertionError):
    """A certified property failed; indicates a bug, not bad user input."""

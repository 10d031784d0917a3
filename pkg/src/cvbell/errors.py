"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An argument violates a documented precondition."""


class CapacityExceeded(RuntimeError):
    """A size or truncation limit was hit; the message says what would be needed."""


class NumericFailure(ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""

"""Exception types shared across the package."""


class SplcoverError(Exception):
    """Base class for all errors raised by splcover."""


class ModelFormatError(SplcoverError):
    """Raised when a .fm document cannot be parsed or violates model invariants."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TooManyProducts(SplcoverError):
    """Product enumeration exceeded the caller's cap.

    ``at_least`` is a lower bound on the number of valid products.
    """

    def __init__(self, at_least):
        super().__init__(f"model has at least {at_least} valid products")
        self.at_least = at_least


class UnsatisfiableModelError(SplcoverError):
    """The model admits no valid product (cross-tree constraints conflict)."""


class InvalidProductError(SplcoverError):
    """A supplied product is not valid in the model."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"prioritized product #{index}: {message}"
        super().__init__(message)
        self.index = index


class CoverageUndefinedError(SplcoverError):
    """Coverage requested over a configuration set with zero total weight."""


class SuiteIncompleteError(SplcoverError):
    """An ordered suite does not reach 100% weighted coverage."""

    def __init__(self, max_level_reached):
        super().__init__(
            f"suite does not reach 100% coverage (max level reached: {max_level_reached}%)"
        )
        self.max_level_reached = max_level_reached


class UncoverableConfigurationsError(SplcoverError):
    """Some weight-positive configurations cannot be covered by any sampled product."""

    def __init__(self, pairs):
        preview = ", ".join(str(p) for p in list(pairs)[:10])
        super().__init__(f"uncoverable configurations remain: {preview}")
        self.pairs = list(pairs)


class InfeasibleInstanceError(SplcoverError):
    """A set-cover instance whose sets do not cover its universe."""


class BudgetExhaustedError(SplcoverError):
    """An internal search budget was exhausted without producing a result."""

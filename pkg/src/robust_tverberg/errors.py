"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Points that should live in one space have different lengths."""


class SchemaError(ValueError):
    """A JSON document does not match the expected layout."""


class BudgetExceeded(RuntimeError):
    """An enumeration or retry budget ran out before an answer was found."""


class RetryBudgetExhausted(BudgetExceeded):
    """Rejection sampling gave up; parameters are probably outside the regime."""

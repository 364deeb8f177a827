"""Exception types raised across the package."""


class TorusRepError(Exception):
    """Base class for user-facing errors."""


class UnknownSymbol(TorusRepError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TableMismatch(TorusRepError):
    pass


class DimensionError(TorusRepError, ValueError):
    pass


class NotSaturated(TorusRepError, ValueError):
    pass


class HypothesisViolation(TorusRepError):
    pass


class InvariantError(AssertionError):
    """An internal consistency check failed (a bug, not bad input)."""

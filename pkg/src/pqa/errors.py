class PQAError(Exception):
    """Base class for library errors."""


class BudgetExceeded(PQAError):
    pass


class NotPointed(PQAError):
    pass


class UnitIdeal(PQAError):
    pass


class InvalidWitness(PQAError):
    """An internal self-check failed. Always a bug, never user error."""


class DimensionMismatch(PQAError, ValueError):
    pass

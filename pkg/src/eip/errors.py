"""Exception hierarchy; each class maps to one CLI exit code."""


class EIPError(Exception):
    exit_code = 1


class ValidationError(EIPError, ValueError):
    """Malformed input: bad dimensions, invalid tuples, empty configurations."""

    exit_code = 1


class BudgetExceeded(EIPError):
    exit_code = 2


class InvariantViolation(EIPError, AssertionError):
    """A bond count or cardinality that should be conserved was not.

    This always signals a bug, never bad input.
    """

    exit_code = 3

"""Exception types shared across the package."""


class ContrexError(Exception):
    """Base class for all package errors."""


class ValidationError(ContrexError):
    """Model or input construction violated a structural rule."""

    def __init__(self, rule: str):
        super().__init__(rule)
        self.rule = rule


class IncompleteAssignmentError(ContrexError):
    """An assignment does not cover every model variable."""


class NonIntegralValueError(ContrexError):
    """An integer-kind variable holds a non-integer value."""


class UnsupportedModelError(ContrexError):
    """The built-in solver cannot certify this model (undetermined continuous variable)."""


class TooLargeError(ContrexError):
    """Exhaustive enumeration refused: too many integer variables."""


class NonIntegralObjectiveError(ContrexError):
    """Lexicographic weights cannot be certified for a non-integral objective."""


class UnknownVariableError(ContrexError):
    """A referenced variable name or id does not exist in the model."""


class InfeasibleTargetError(ContrexError):
    """A property fixing targets a value outside the variable's bounds."""


class PropertyInfeasibleError(ContrexError):
    """The enforced property contradicts the problem constraints."""

    def __init__(self, property_, message="the requested property contradicts the problem constraints"):
        super().__init__(message)
        self.property = property_


class SolveTimeoutError(ContrexError):
    """A solve hit its time or node limit before proving optimality."""


class MismatchedVariableSetsError(ContrexError):
    """Two assignments being diffed do not cover the same variables."""


class InvalidParamsError(ContrexError):
    """Instance generation parameters are out of range."""


class TooManyPointsError(ContrexError):
    """Routing model refused: subset constraint count would explode."""


class SchemaVersionMismatchError(ContrexError):
    """A persisted session file was written with an incompatible schema version."""

"""Exception hierarchy shared by every module."""


class HarmsurfError(Exception):
    """Base class for all library errors."""


class InvalidInputError(HarmsurfError, ValueError):
    """Malformed or inconsistent input data."""


class DomainError(HarmsurfError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class AccuracyError(HarmsurfError, ArithmeticError):
    """A quadrature did not reach its tolerance within the refinement budget.

    Attributes
    ----------
    estimate : float
        Achieved error estimate at the last refinement.
    value : object
        Best available value, for callers that want to degrade gracefully.
    """

    def __init__(self, message, estimate, value=None):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate
        self.value = value


class NumericalConsistencyError(HarmsurfError, ArithmeticError):
    """A quantity violated a property that holds exactly in theory."""


class UnsupportedDimensionError(HarmsurfError, ValueError):
    """The operation is not available for this ambient dimension."""

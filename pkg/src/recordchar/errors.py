"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateConditioningError(ArithmeticError):
    """The conditioning event has (numerically) zero probability density."""


class InsufficientDataError(ValueError):
    """Too few usable observations to compute the requested quantity."""


class EstimationError(ValueError):
    """A parameter estimator cannot be evaluated on the given data."""


class UnreliableNullError(RuntimeError):
    """Too few bootstrap replicates produced a usable statistic."""

    def __init__(self, message: str, usable: int, requested: int):
        super().__init__(message)
        self.usable = usable
        self.requested = requested

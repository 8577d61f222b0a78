"""Exception types shared across the package."""


class CantorScaleError(Exception):
    """Base class for all package-specific errors."""


class ParameterRangeError(CantorScaleError, ValueError):
    """Family parameter (epsilon or shape coefficient) outside its admissible range."""


class DomainError(CantorScaleError, ValueError):
    """Point outside the family's domain interval."""


class ConvergenceError(CantorScaleError, RuntimeError):
    """A numerical iteration failed to reach its tolerance."""


class BudgetExceededError(CantorScaleError, RuntimeError):
    """Requested depth exceeds the configured cylinder budget."""

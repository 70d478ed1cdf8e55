class VacpropError(Exception):
    pass


class DomainError(VacpropError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedVariantError(VacpropError, TypeError):
    """A model variant that the requested operation does not accept."""


class NonConvergenceError(VacpropError, ArithmeticError):
    """A numerical procedure did not reach its tolerance.

    ``where`` carries the offending parameter (a frequency or omega*a value).
    """

    def __init__(self, message: str, where: float | None = None):
        super().__init__(message)
        self.where = where


class CubatureRefused(NonConvergenceError):
    """Cubature requested above the configured omega*a ceiling."""

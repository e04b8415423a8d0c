"""Exception hierarchy shared by all modules."""


class SepCovMixError(Exception):
    """Base class for all library errors."""


class DimensionError(SepCovMixError):
    """Incompatible or invalid matrix dimensions."""


class DomainError(SepCovMixError):
    """Argument outside the mathematical domain (e.g. Im(z) <= 0)."""


class NumericError(SepCovMixError):
    """A numerical routine failed (singular matrix, eigensolver breakdown)."""


class ConvergenceError(NumericError):
    """Iterative solver exhausted its budget without reaching tolerance."""

    def __init__(self, message, best_residual=None, iterations=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.iterations = iterations

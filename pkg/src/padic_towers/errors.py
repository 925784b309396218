"""Exception hierarchy shared by the engines and the command line."""


class TowerError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DomainError(TowerError, ValueError):
    """Invalid input or a mathematically undefined request (exit code 1)."""

    exit_code = 1


class VanishingTowerError(DomainError):
    """A cyclic resultant in the tower is exactly zero."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class PrecisionError(TowerError, ArithmeticError):
    """Requested precision or exact-computation budget cannot be met (exit code 2)."""

    exit_code = 2

    def __init__(self, message, precision=None):
        super().__init__(message)
        self.precision = precision


class InvariantViolation(TowerError, AssertionError):
    """An internal cross-check failed; always indicates a bug or a bad input contract."""

    exit_code = 1


class TableMismatch(TowerError):
    """A golden table did not reproduce exactly (exit code 3)."""

    exit_code = 3


class PolynomialSyntaxError(DomainError):
    """Polynomial text could not be parsed."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position

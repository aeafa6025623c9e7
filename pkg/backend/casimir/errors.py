from typing import Optional


class CasimirError(Exception):
    """Base class for every error raised by the casimir package."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(CasimirError, ValueError):
    """Model or configuration parameters are missing or inconsistent."""


class IngestionError(CasimirError):
    """Optical data could not be read or violates the table invariants."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}: "
        elif where:
            where = f"{where} "
        super().__init__(f"{where}{message}")


class ConvergenceError(CasimirError, ArithmeticError):
    """A sum, integral or fit failed to reach the requested accuracy."""


class DegenerateInputError(CasimirError, ArithmeticError):
    """A ratio was requested with a denominator at or below its noise floor."""


class RegimeWarning(UserWarning):
    """Inputs lie outside the regime where an approximation is trusted."""


class AccuracyWarning(UserWarning):
    """An asymptotic series is evaluated where its truncation error is not small."""

# ABOUTME: Exception hierarchy shared by every operator, quadrature and harness module
# ABOUTME: Maps each failure class to a CLI exit code

from typing import Iterable, List, Optional


class OperatorError(Exception):
    """Base class for all failures raised by the operator library."""

    exit_code = 4

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DomainError(OperatorError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedOrder(DomainError):
    """Bessel order that is not an integer or half-integer, or too large."""


class AxisSingularity(DomainError):
    """Evaluation requested inside the exclusion tube of a singular set."""


class QuadratureFailure(OperatorError, ArithmeticError):
    """A ray integral could not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, tolerance: float):
        super().__init__(f"{message} (estimate={estimate:.3e}, tolerance={tolerance:.3e})")
        self.estimate = estimate
        self.tolerance = tolerance


class ConfigError(OperatorError, ValueError):
    """Invalid suite selection or harness configuration."""

    exit_code = 2

    def __init__(self, message: str, valid: Optional[Iterable[str]] = None):
        self.valid: List[str] = list(valid or [])
        if self.valid:
            message = f"{message}; valid names: {', '.join(self.valid)}"
        super().__init__(message)


class IoError(OperatorError, OSError):
    """A report or grid file could not be written."""

    exit_code = 3

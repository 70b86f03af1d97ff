"""Exception hierarchy shared across the package."""


class HelsonSpecError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HelsonSpecError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(HelsonSpecError, ValueError):
    """A structurally invalid configuration (sizes, ranges, missing parameters)."""


class NumericError(HelsonSpecError, ArithmeticError):
    """A computation produced non-finite or otherwise unusable values."""


class IterationError(HelsonSpecError, RuntimeError):
    """An iterative solver failed to converge.

    The best available estimates are attached as ``result`` so callers can
    inspect how far the iteration got.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DiagnosticError(HelsonSpecError, RuntimeError):
    """An experiment detected an inconsistency; diagnostic data is attached."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class UsageError(HelsonSpecError, ValueError):
    """Invalid command line or config file input (CLI exit code 2)."""

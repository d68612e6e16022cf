"""Domain exceptions module."""

from .custom_exceptions import (
    # Base exceptions
    BaseApplicationException,
    ErrorCode,
    ExitCode,

    # Configuration exceptions
    ConfigurationError,

    # Input exceptions
    ParameterError,
    DimensionMismatchError,
    FormatError,
    ResultIOError,

    # Numerical exceptions
    NumericalError,
    SolverError,
    EnumerationCapExceeded,
    ProjectionNotConverged,

    # Utilities
    ExceptionHandler
)

__all__ = [
    "BaseApplicationException",
    "ErrorCode",
    "ExitCode",
    "ConfigurationError",
    "ParameterError",
    "DimensionMismatchError",
    "FormatError",
    "ResultIOError",
    "NumericalError",
    "SolverError",
    "EnumerationCapExceeded",
    "ProjectionNotConverged",
    "ExceptionHandler"
]

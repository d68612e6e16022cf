"""Exception hierarchy for the toolkit.

Every exception carries an error code, structured details and a short
user-facing message. The CLI maps error categories onto process exit codes
through :class:`ExceptionHandler`.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class ErrorCode(Enum):
    """Application error codes for categorization."""

    # Configuration errors (1000-1099)
    CONFIG_INVALID = 1001
    CONFIG_VALIDATION_FAILED = 1003

    # Parameter errors (2000-2099)
    PARAMETER_INVALID = 2001
    PARAMETER_OUT_OF_RANGE = 2002
    PARAMETER_NOT_FINITE = 2003

    # Dimension errors (3000-3099)
    DIMENSION_MISMATCH = 3001

    # File format and I/O errors (4000-4099)
    FORMAT_MALFORMED_HEADER = 4001
    FORMAT_MALFORMED_ROW = 4002
    IO_READ_FAILED = 4003
    IO_WRITE_FAILED = 4004

    # Numerical errors (5000-5099)
    NUMERICAL_SINGULAR = 5001
    NUMERICAL_SVD_FAILED = 5002
    NUMERICAL_NOT_CONVERGED = 5003
    NUMERICAL_ENUMERATION_CAP = 5005


class ExitCode(Enum):
    """Process exit codes of the command-line interface."""

    SUCCESS = 0
    USAGE_ERROR = 1
    IO_ERROR = 2
    NUMERICAL_FAILURE = 3


class BaseApplicationException(Exception):
    """Base exception class for all application exceptions."""

    exit_code: ExitCode = ExitCode.USAGE_ERROR

    def __init__(
        self,
        message: str,
        error_code: ErrorCode,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None,
        recoverable: bool = True
    ):
        """Initialize base exception.

        Args:
            message: Technical error message
            error_code: Error code for categorization
            details: Additional error details
            user_message: User-friendly error message
            recoverable: Whether the error is recoverable
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        self.user_message = user_message or self._get_default_user_message()
        self.recoverable = recoverable

    def _get_default_user_message(self) -> str:
        """Get default user-friendly message based on error code."""
        messages = {
            ErrorCode.CONFIG_INVALID: "The configuration is invalid. Check the settings.",
            ErrorCode.PARAMETER_INVALID: "An input parameter is invalid.",
            ErrorCode.PARAMETER_OUT_OF_RANGE: "An input parameter is out of range.",
            ErrorCode.PARAMETER_NOT_FINITE: "Inputs must be finite numbers.",
            ErrorCode.DIMENSION_MISMATCH: "Array dimensions do not match.",
            ErrorCode.FORMAT_MALFORMED_HEADER: "The matrix file header is malformed.",
            ErrorCode.IO_READ_FAILED: "A file could not be read.",
            ErrorCode.IO_WRITE_FAILED: "A file could not be written.",
            ErrorCode.NUMERICAL_SINGULAR: "A linear system is numerically singular.",
            ErrorCode.NUMERICAL_SVD_FAILED: "A singular value decomposition failed.",
        }
        return messages.get(self.error_code, "An unexpected error occurred.")

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for serialization."""
        return {
            "error_code": self.error_code.value,
            "error_name": self.error_code.name,
            "message": self.message,
            "user_message": self.user_message,
            "details": self.details,
            "recoverable": self.recoverable
        }


# Configuration Exceptions
class ConfigurationError(BaseApplicationException):
    """Base exception for configuration errors."""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.CONFIG_INVALID)
        super().__init__(message=message, **kwargs)


# Parameter Exceptions
class ParameterError(BaseApplicationException):
    """Exception for invalid scalar parameters (s > n, tau0 < 0, ...)."""

    def __init__(
        self,
        message: str,
        parameter: Optional[str] = None,
        value: Any = None,
        **kwargs
    ):
        kwargs.setdefault("error_code", ErrorCode.PARAMETER_INVALID)
        details = kwargs.pop("details", None) or {}
        if parameter is not None:
            details.update({"parameter": parameter, "value": value})
        super().__init__(message=message, details=details, **kwargs)
        self.parameter = parameter


class DimensionMismatchError(BaseApplicationException):
    """Exception for incompatible array shapes."""

    def __init__(self, message: str, expected: Any = None, actual: Any = None, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.DIMENSION_MISMATCH)
        super().__init__(
            message=message,
            details={"expected": expected, "actual": actual},
            **kwargs
        )


# File format and I/O exceptions
class FormatError(BaseApplicationException):
    """Exception for malformed matrix or config files."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.FORMAT_MALFORMED_HEADER)
        super().__init__(
            message=message,
            details={"path": path, "line": line},
            **kwargs
        )
        self.path = path


class ResultIOError(BaseApplicationException):
    """Exception for file system failures, always carrying the path."""

    exit_code = ExitCode.IO_ERROR

    def __init__(self, path: str, original_error: Optional[Exception] = None, write: bool = True, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.IO_WRITE_FAILED if write else ErrorCode.IO_READ_FAILED)
        super().__init__(
            message=f"I/O failure on {path}: {original_error}",
            details={
                "path": path,
                "original_error": str(original_error) if original_error else None
            },
            **kwargs
        )
        self.path = path


# Numerical exceptions
class NumericalError(BaseApplicationException):
    """Exception for numerical breakdowns (singular systems, SVD failures)."""

    exit_code = ExitCode.NUMERICAL_FAILURE

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.NUMERICAL_SINGULAR)
        super().__init__(message=message, **kwargs)


class SolverError(NumericalError):
    """Exception raised inside a solve (factorization or SVD breakdown).

    Solvers catch it and turn it into a report status; it only escapes from
    the proximal helpers when they are called directly.
    """

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("error_code", ErrorCode.NUMERICAL_SVD_FAILED)
        super().__init__(message=message, **kwargs)


class EnumerationCapExceeded(NumericalError):
    """Exception when exact RIC enumeration would exceed the support cap."""

    def __init__(self, supports: int, cap: int, **kwargs):
        super().__init__(
            message=f"Exact enumeration needs {supports} supports, cap is {cap}; use sampled mode",
            error_code=ErrorCode.NUMERICAL_ENUMERATION_CAP,
            details={"supports": supports, "cap": cap},
            recoverable=False,
            **kwargs
        )


class ProjectionNotConverged(NumericalError):
    """Exception when the multiplier root find of a ball projection stalls."""

    def __init__(self, iterations: int, gap: float, **kwargs):
        super().__init__(
            message=f"Ball projection root find did not converge after {iterations} steps (gap {gap:.3e})",
            error_code=ErrorCode.NUMERICAL_NOT_CONVERGED,
            details={"iterations": iterations, "gap": gap},
            **kwargs
        )


# Exception Handlers for Different Layers
class ExceptionHandler:
    """Central exception handler for the presentation layer."""

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """Map an exception onto a CLI exit code and log it.

        Args:
            error: The exception to handle

        Returns:
            Process exit code
        """
        if isinstance(error, BaseApplicationException):
            logger.error(f"Application error: {error.to_dict()}")
            return error.exit_code.value
        if isinstance(error, OSError):
            logger.error(f"I/O error: {error}")
            return ExitCode.IO_ERROR.value
        logger.error(f"Unexpected error: {error}", exc_info=True)
        return ExitCode.NUMERICAL_FAILURE.value

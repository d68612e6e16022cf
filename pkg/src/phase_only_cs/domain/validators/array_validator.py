"""Precondition checks shared by every service.

The checks raise domain exceptions instead of returning flags, so callers can
chain them at the top of an operation.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..exceptions import DimensionMismatchError, ErrorCode, ParameterError


def require_finite(array: np.ndarray, name: str) -> np.ndarray:
    """Reject NaN or infinite entries.

    Args:
        array: Array to check
        name: Name used in the error message

    Returns:
        The array, unchanged
    """
    if not np.all(np.isfinite(array)):
        raise ParameterError(
            f"{name} contains non-finite entries",
            parameter=name,
            error_code=ErrorCode.PARAMETER_NOT_FINITE,
        )
    return array


def require_vector(array: np.ndarray, name: str, length: Optional[int] = None) -> np.ndarray:
    """Require a one-dimensional array, optionally of a given length."""
    if array.ndim != 1:
        raise DimensionMismatchError(
            f"{name} must be a vector", expected="1-d", actual=array.shape
        )
    if length is not None and array.shape[0] != length:
        raise DimensionMismatchError(
            f"{name} has length {array.shape[0]}, expected {length}",
            expected=length,
            actual=array.shape[0],
        )
    return array


def require_shape(array: np.ndarray, name: str, shape: Sequence[int]) -> np.ndarray:
    """Require an exact shape."""
    if tuple(array.shape) != tuple(shape):
        raise DimensionMismatchError(
            f"{name} has shape {array.shape}, expected {tuple(shape)}",
            expected=tuple(shape),
            actual=array.shape,
        )
    return array


def require_positive_int(value: int, name: str, minimum: int = 1) -> int:
    """Require an integer no smaller than ``minimum``."""
    if int(value) != value or value < minimum:
        raise ParameterError(
            f"{name} must be an integer >= {minimum}, got {value}",
            parameter=name,
            value=value,
            error_code=ErrorCode.PARAMETER_OUT_OF_RANGE,
        )
    return int(value)


def require_nonnegative(value: float, name: str) -> float:
    """Require a finite value >= 0."""
    if not np.isfinite(value) or value < 0:
        raise ParameterError(
            f"{name} must be finite and >= 0, got {value}",
            parameter=name,
            value=value,
            error_code=ErrorCode.PARAMETER_OUT_OF_RANGE,
        )
    return float(value)


def require_positive(value: float, name: str) -> float:
    """Require a finite value > 0."""
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(
            f"{name} must be finite and > 0, got {value}",
            parameter=name,
            value=value,
            error_code=ErrorCode.PARAMETER_OUT_OF_RANGE,
        )
    return float(value)


def require_unit_norm(vector: np.ndarray, name: str, tolerance: float = 1e-10) -> np.ndarray:
    """Require ``| ||vector|| - 1 | <= tolerance``."""
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > tolerance:
        raise ParameterError(
            f"{name} must have unit norm, got {norm:.3e}",
            parameter=name,
            value=norm,
            error_code=ErrorCode.PARAMETER_OUT_OF_RANGE,
        )
    return vector

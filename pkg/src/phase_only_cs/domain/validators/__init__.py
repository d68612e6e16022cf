"""Domain validators for array and parameter preconditions."""

from .array_validator import (
    require_finite,
    require_nonnegative,
    require_positive,
    require_positive_int,
    require_shape,
    require_unit_norm,
    require_vector,
)

__all__ = [
    "require_finite",
    "require_nonnegative",
    "require_positive",
    "require_positive_int",
    "require_shape",
    "require_unit_norm",
    "require_vector",
]

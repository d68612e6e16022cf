"""Logging infrastructure module."""

from .logger import (
    RunContext,
    LoggingMixin,
    get_struct_logger,
    log_function_call,
    run_id_var,
    setup_logging,
)

__all__ = [
    "setup_logging",
    "get_struct_logger",
    "RunContext",
    "LoggingMixin",
    "log_function_call",
    "run_id_var",
]

"""Structured logging with rotation and run id tracking.

Every record carries the id of the experiment (or CLI invocation) that
produced it, so the interleaved records of concurrent trials can be grouped
afterwards.
"""

from __future__ import annotations

import functools
import logging
import logging.handlers
import sys
import threading
import time
import uuid
from contextvars import ContextVar
from pathlib import Path
from typing import Any, Optional

import structlog
from pythonjsonlogger import jsonlogger

from ..config.settings import get_settings

# Context variable for run id tracking
run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


class RunIdFilter(logging.Filter):
    """Add the current run id to log records."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = run_id_var.get() or "no-run-id"
        return True


class ColoredFormatter(logging.Formatter):
    """Colored formatter for console output."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"
        result = super().format(record)
        # Other handlers see the plain name
        record.levelname = levelname
        return result


class LoggerSetup:
    """Setup and configure application logging."""

    def __init__(self, settings: Optional[Any] = None):
        """Initialize logger setup.

        Args:
            settings: Optional settings object, uses get_settings() if None
        """
        self.settings = settings or get_settings()
        self._setup_complete = False

    def setup(self) -> None:
        """Configure the root logger once."""
        if self._setup_complete:
            return

        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, self.settings.log_level))
        root_logger.handlers = []

        run_id_filter = RunIdFilter()

        console_handler = self._create_console_handler()
        console_handler.addFilter(run_id_filter)
        root_logger.addHandler(console_handler)

        if self.settings.log_file:
            file_handler = self._create_file_handler()
            file_handler.addFilter(run_id_filter)
            root_logger.addHandler(file_handler)

        configure_structlog()

        logging.getLogger("matplotlib").setLevel(logging.WARNING)

        self._setup_complete = True

    def _create_console_handler(self) -> logging.StreamHandler:
        """Console handler on stderr; colored when attached to a TTY."""
        handler = logging.StreamHandler(sys.stderr)
        if sys.stderr.isatty():
            formatter: logging.Formatter = ColoredFormatter(self.settings.log_format)
        else:
            formatter = logging.Formatter(self.settings.log_format)
        handler.setFormatter(formatter)
        handler.setLevel(getattr(logging, self.settings.log_level))
        return handler

    def _create_file_handler(self) -> logging.handlers.RotatingFileHandler:
        """Rotating file handler writing one JSON object per record."""
        log_file = Path(self.settings.log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        handler = logging.handlers.RotatingFileHandler(
            filename=str(log_file),
            maxBytes=self.settings.log_rotation_size,
            backupCount=self.settings.log_backup_count,
            encoding="utf-8"
        )
        json_formatter = jsonlogger.JsonFormatter(
            "%(asctime)s %(name)s %(levelname)s %(run_id)s %(message)s",
            rename_fields={"asctime": "timestamp", "levelname": "level"},
            timestamp=True
        )
        handler.setFormatter(json_formatter)
        handler.setLevel(getattr(logging, self.settings.log_level))
        return handler


class RunContext:
    """Context manager binding a run id to every record logged inside it.

    Worker threads do not inherit context variables; the experiment runner
    copies the context into each submitted task.
    """

    def __init__(self, run_id: Optional[str] = None):
        self.run_id = run_id or uuid.uuid4().hex[:12]
        self.token = None

    def __enter__(self):
        self.token = run_id_var.set(self.run_id)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.token:
            run_id_var.reset(self.token)


class LoggingMixin:
    """Mixin class to add structured logging to services."""

    @property
    def struct_logger(self) -> structlog.BoundLogger:
        if not hasattr(self, "_struct_logger"):
            self._struct_logger = get_struct_logger(self.__class__.__module__)
        return self._struct_logger

    def log_debug(self, message: str, **kwargs) -> None:
        """Log debug message with context.

        Args:
            message: Log message
            **kwargs: Additional context
        """
        self.struct_logger.debug(message, **kwargs)

    def log_info(self, message: str, **kwargs) -> None:
        self.struct_logger.info(message, **kwargs)

    def log_warning(self, message: str, **kwargs) -> None:
        self.struct_logger.warning(message, **kwargs)


def _add_run_id(logger, method_name, event_dict):
    run_id = run_id_var.get()
    if run_id:
        event_dict["run_id"] = run_id
    return event_dict


def configure_structlog() -> None:
    """Route structlog through the stdlib handlers; leaves the root logger alone."""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            _add_run_id,
            structlog.dev.ConsoleRenderer() if sys.stderr.isatty() else structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


# Singleton instance, replaced only under _setup_lock
_logger_setup: Optional[LoggerSetup] = None
_structlog_configured = False
_setup_lock = threading.Lock()


def setup_logging(settings: Optional[Any] = None, force: bool = False) -> LoggerSetup:
    """Install the root handlers; called by the CLI entry point.

    Library code never calls this, so importing the package does not touch
    the host application's logging.

    Args:
        settings: Optional settings object
        force: Reconfigure even if logging was already set up

    Returns:
        LoggerSetup instance
    """
    global _logger_setup, _structlog_configured

    with _setup_lock:
        if _logger_setup is None or force:
            setup = LoggerSetup(settings)
            setup.setup()
            _logger_setup = setup
            _structlog_configured = True
        return _logger_setup


def get_struct_logger(name: str) -> structlog.BoundLogger:
    """Get a structured logger; configures structlog (not the root logger) on first use."""
    global _structlog_configured

    if not _structlog_configured:
        with _setup_lock:
            if not _structlog_configured:
                configure_structlog()
                _structlog_configured = True
    return structlog.get_logger(name)


def log_function_call(func):
    """Decorator logging calls of long-running operations with timing."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_struct_logger(func.__module__)
        start_time = time.perf_counter()
        logger.debug(f"Calling {func.__name__}", function=func.__name__)
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(
                f"Failed {func.__name__}",
                function=func.__name__,
                elapsed_time=time.perf_counter() - start_time,
                error=str(e),
            )
            raise
        logger.debug(
            f"Completed {func.__name__}",
            function=func.__name__,
            elapsed_time=time.perf_counter() - start_time,
        )
        return result

    return wrapper

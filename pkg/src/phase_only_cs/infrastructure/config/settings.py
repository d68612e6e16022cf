"""Application settings using Pydantic Settings v2.

Values come from environment variables prefixed with ``POCS_`` and from an
optional ``.env`` file. Per-experiment parameters live in experiment config
files instead (see :mod:`.experiment_config`); the settings here hold
process-wide defaults such as logging, worker count and solver knobs.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ...domain.models import SolverOptions

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Process-wide settings with validation."""

    model_config = SettingsConfigDict(
        env_prefix="POCS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        validate_default=True,
    )

    # Environment configuration
    environment: Literal["development", "production", "testing"] = Field(
        default="production",
        description="Current environment mode"
    )
    debug: bool = Field(
        default=False,
        description="Enable debug mode"
    )

    # Logging Configuration
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        description="Logging level"
    )
    log_file: Optional[Path] = Field(
        default=None,
        description="Rotating JSON log file; console only when unset"
    )
    log_rotation_size: int = Field(
        default=10 * 1024 * 1024,
        ge=1024,
        description="Log file size before rotation (bytes)"
    )
    log_backup_count: int = Field(
        default=5,
        ge=0,
        le=100,
        description="Number of rotated log files to keep"
    )
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - [%(run_id)s] - %(message)s",
        description="Console log format"
    )

    # Output and execution
    results_dir: Path = Field(
        default=Path("results"),
        description="Default directory for experiment outputs"
    )
    workers: int = Field(
        default=4,
        ge=1,
        le=256,
        description="Worker threads used to fan out Monte Carlo trials"
    )
    ric_enumeration_cap: int = Field(
        default=1_000_000,
        ge=1,
        description="Largest support count exact RIC enumeration may visit"
    )

    # Solver defaults
    solver_penalty: float = Field(default=1.0, gt=0, description="ADMM penalty")
    solver_over_relax: float = Field(default=1.5, ge=1.0, le=1.8, description="ADMM over-relaxation")
    solver_abs_tol: float = Field(default=1e-7, gt=0)
    solver_rel_tol: float = Field(default=1e-7, gt=0)
    solver_max_iter: int = Field(default=10000, ge=1)

    # Experiment defaults
    success_threshold: float = Field(default=1e-3, gt=0, description="Trial success threshold")
    dither_scale: float = Field(default=1.0 / 3.0, gt=0, description="Default dither scale rho")

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept lower-case level names."""
        return v.upper() if isinstance(v, str) else v

    @field_validator("log_file")
    @classmethod
    def validate_log_file(cls, v: Optional[Path]) -> Optional[Path]:
        """Ensure the log directory exists if a log file is specified."""
        if v is not None:
            v = Path(v)
            v.parent.mkdir(parents=True, exist_ok=True)
        return v

    @model_validator(mode="after")
    def validate_debug_level(self) -> "Settings":
        """Debug mode implies DEBUG logging."""
        if self.debug and self.log_level != "DEBUG":
            logger.debug("debug enabled, lowering log level to DEBUG")
            self.log_level = "DEBUG"
        return self

    def solver_options(self) -> SolverOptions:
        """ADMM options built from the solver defaults."""
        return SolverOptions(
            penalty=self.solver_penalty,
            over_relax=self.solver_over_relax,
            abs_tol=self.solver_abs_tol,
            rel_tol=self.solver_rel_tol,
            max_iter=self.solver_max_iter,
        )

    @classmethod
    def load_from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """Load settings from a specific environment file.

        Args:
            env_file: Path to environment file (e.g., '.env.testing')

        Returns:
            Configured Settings instance
        """
        if env_file:
            return cls(_env_file=env_file)
        return cls()


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the process-wide settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings.load_from_env()
    return _settings


def reload_settings(env_file: Optional[str] = None) -> Settings:
    """Reload settings, optionally from a specific env file."""
    global _settings
    _settings = Settings.load_from_env(env_file)
    return _settings

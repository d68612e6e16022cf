"""Experiment config files.

A config file holds one ``key = value`` per line with ``#`` comments, for
example::

    # Figure-1 style sweep
    mode = pocs-nonuniform
    n = 80
    s = 3
    m_list = 6, 12, 18, 24, 30, 36, 42, 48
    trials = 100
    master_seed = 7
    solver.max_iter = 20000

Keys are the :class:`ExperimentConfig` fields; ``solver.<name>`` keys set
individual ADMM options. Unset threshold, rho and solver values fall back
to the process settings.
"""

from __future__ import annotations

import logging
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from ...domain.exceptions import ConfigurationError, ErrorCode, ResultIOError
from ...domain.models import ExperimentConfig, SolverOptions
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

SOLVER_PREFIX = "solver."
_SOLVER_FIELDS = {f.name: f.type for f in fields(SolverOptions)}


def _solver_options(raw: Mapping[str, str], settings: Settings) -> SolverOptions:
    values: Dict[str, Any] = settings.solver_options().to_dict()
    for key, value in raw.items():
        name = key[len(SOLVER_PREFIX):]
        if name not in _SOLVER_FIELDS:
            raise ConfigurationError(
                f"unknown solver option '{name}'",
                error_code=ErrorCode.CONFIG_VALIDATION_FAILED,
                details={"key": key},
            )
        try:
            values[name] = int(value) if name == "max_iter" else float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(
                f"solver option '{name}' is not a number: {value!r}",
                error_code=ErrorCode.CONFIG_VALIDATION_FAILED,
                details={"key": key, "value": value},
            ) from exc
    return SolverOptions(**values)


def parse_experiment_config(
    raw: Mapping[str, Optional[str]],
    settings: Optional[Settings] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """Validate raw key/value pairs into an :class:`ExperimentConfig`.

    Args:
        raw: Parsed key/value pairs
        settings: Settings supplying defaults, uses get_settings() if None
        overrides: Values that win over the file (e.g. ``--seed`` from the CLI)

    Raises:
        ConfigurationError: Unknown keys or invalid values
    """
    settings = settings or get_settings()
    data: Dict[str, Any] = {}
    solver_raw: Dict[str, str] = {}
    for key, value in raw.items():
        key = key.strip()
        if value is None:
            raise ConfigurationError(
                f"config key '{key}' has no value",
                error_code=ErrorCode.CONFIG_VALIDATION_FAILED,
                details={"key": key},
            )
        if key.startswith(SOLVER_PREFIX):
            solver_raw[key] = value
        else:
            data[key] = value.strip()

    data.setdefault("threshold", settings.success_threshold)
    data.setdefault("rho", settings.dither_scale)
    data["solver"] = _solver_options(solver_raw, settings)
    data.update(overrides or {})

    try:
        config = ExperimentConfig(**data)
    except ValidationError as exc:
        raise ConfigurationError(
            f"invalid experiment config: {exc.error_count()} error(s)",
            error_code=ErrorCode.CONFIG_VALIDATION_FAILED,
            details={"errors": [
                {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
                for err in exc.errors()
            ]},
        ) from exc

    logger.debug(f"Parsed experiment config: mode={config.mode.value} m_list={config.m_list}")
    return config


def load_experiment_config(
    path: Union[str, Path],
    settings: Optional[Settings] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """Read and validate an experiment config file.

    Raises:
        ResultIOError: File missing or unreadable
        ConfigurationError: Unknown keys or invalid values
    """
    path = Path(path)
    if not path.is_file():
        raise ResultIOError(str(path), FileNotFoundError("config file not found"), write=False)
    try:
        raw = dotenv_values(path, interpolate=False)
    except (OSError, UnicodeDecodeError) as exc:
        raise ResultIOError(str(path), exc, write=False) from exc
    logger.info(f"Loaded experiment config from {path}")
    return parse_experiment_config(raw, settings=settings, overrides=overrides)

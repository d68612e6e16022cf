"""Configuration module."""

from .settings import Settings, get_settings, reload_settings
from .experiment_config import load_experiment_config, parse_experiment_config

__all__ = [
    "Settings",
    "get_settings",
    "reload_settings",
    "load_experiment_config",
    "parse_experiment_config",
]

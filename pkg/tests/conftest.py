"""Pytest configuration and shared fixtures for test suite."""

import logging
import sys
import tempfile
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

from src.phase_only_cs.application.services.sensing_service import (
    gen_sparse_signal,
    measure_phases,
    sample_ensemble,
)
from src.phase_only_cs.domain.models import PhaseObservation, SensingEnsemble, SignalField, SolverOptions
from src.phase_only_cs.domain.utilities import make_rng
from src.phase_only_cs.infrastructure.config import settings as settings_module
from src.phase_only_cs.infrastructure.config.settings import Settings
from src.phase_only_cs.infrastructure.logging import logger as logger_module


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo reproduction runs (minutes)")


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; every test gets the same stream."""
    return make_rng(20240607)


@pytest.fixture
def test_settings() -> Settings:
    """Settings that ignore any .env file on the machine."""
    return Settings(_env_file=None, environment="testing", log_level="WARNING")


@pytest.fixture
def tight_options() -> SolverOptions:
    return SolverOptions(abs_tol=1e-9, rel_tol=1e-9, max_iter=20000)


@pytest.fixture
def small_ensemble(rng) -> SensingEnsemble:
    """Phi with m=60, n=40."""
    return sample_ensemble(60, 40, rng)


@pytest.fixture
def sparse_signal(rng) -> np.ndarray:
    """Unit-norm complex 4-sparse signal of length 40."""
    return gen_sparse_signal(40, 4, SignalField.COMPLEX, rng)


@pytest.fixture
def small_observation(small_ensemble, sparse_signal) -> PhaseObservation:
    return measure_phases(small_ensemble, sparse_signal)


@pytest.fixture
def temp_output_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test outputs."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture(autouse=True)
def reset_singletons():
    """Reset the settings and logging singletons between tests."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers = handlers
    root.setLevel(level)
    settings_module._settings = None
    logger_module._logger_setup = None

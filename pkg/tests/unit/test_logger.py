"""Unit tests for logging setup and run id tracking."""

import json
import logging
from concurrent.futures import ThreadPoolExecutor

import pytest

from src.phase_only_cs.infrastructure.config.settings import Settings
from src.phase_only_cs.infrastructure.logging import (
    RunContext,
    get_struct_logger,
    log_function_call,
    run_id_var,
    setup_logging,
)
from src.phase_only_cs.infrastructure.logging.logger import RunIdFilter


class TestSetupLogging:
    """Test cases for root logger configuration."""

    def test_struct_logger_leaves_root_handlers_alone(self):
        root = logging.getLogger()
        before = list(root.handlers)
        get_struct_logger("phase_only_cs.tests").warning("library event", m=12)
        assert root.handlers == before

    def test_setup_installs_console_handler(self, test_settings):
        setup_logging(test_settings, force=True)
        root = logging.getLogger()
        assert root.level == logging.WARNING
        assert len(root.handlers) == 1
        assert any(isinstance(f, RunIdFilter) for f in root.handlers[0].filters)

    def test_concurrent_setup_yields_one_instance(self, test_settings):
        with ThreadPoolExecutor(max_workers=8) as pool:
            setups = list(pool.map(lambda _: setup_logging(test_settings), range(16)))
        assert all(setup is setups[0] for setup in setups)
        assert len(logging.getLogger().handlers) == 1

    def test_file_handler_writes_json_with_run_id(self, temp_output_dir):
        log_file = temp_output_dir / "logs" / "pocs.jsonl"
        settings = Settings(_env_file=None, environment="testing", log_level="INFO", log_file=log_file)
        setup_logging(settings, force=True)
        with RunContext("run-abc"):
            logging.getLogger("phase_only_cs.tests").info("sweep started")
        for handler in logging.getLogger().handlers:
            handler.flush()
            handler.close()

        record = json.loads(log_file.read_text(encoding="utf-8").splitlines()[-1])
        assert record["message"] == "sweep started"
        assert record["run_id"] == "run-abc"


class TestRunContext:
    """Test cases for run id binding."""

    def test_binds_and_restores(self):
        assert run_id_var.get() is None
        with RunContext("r1") as run:
            assert run.run_id == "r1"
            assert run_id_var.get() == "r1"
        assert run_id_var.get() is None

    def test_generates_id(self):
        with RunContext() as run:
            assert len(run.run_id) == 12


class TestLogFunctionCall:
    """Test cases for the timing decorator."""

    def test_returns_result(self):
        @log_function_call
        def double(value):
            return 2 * value

        assert double(4) == 8
        assert double.__name__ == "double"

    def test_reraises(self):
        @log_function_call
        def fail():
            raise ValueError("bad")

        with pytest.raises(ValueError):
            fail()

import logging
import sys

import pytest

from src.utils.logging_config import ROOT_LOGGER_NAME, get_logger, setup_environment_logging


@pytest.fixture
def logging_env(monkeypatch):
    """Fixture restoring the session's logger setup afterwards"""
    for name in ("LOG_LEVEL", "LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    yield monkeypatch
    for handler in logging.getLogger(ROOT_LOGGER_NAME).handlers:
        handler.close()
    monkeypatch.undo()
    setup_environment_logging()


class TestEnvironmentLogging:
    """Unit tests for the environment driven logger setup"""

    def test_defaults(self, logging_env):
        """Test the stderr handler at WARNING"""
        logger = setup_environment_logging()

        assert logger.name == ROOT_LOGGER_NAME
        assert logger.level == logging.WARNING
        assert [type(h) for h in logger.handlers] == [logging.StreamHandler]
        assert logger.handlers[0].stream is sys.stderr

    def test_level_and_file(self, logging_env, tmp_path):
        """Test LOG_LEVEL and a LOG_FILE in a missing directory"""
        log_file = tmp_path / "logs" / "workbench.log"
        logging_env.setenv("LOG_LEVEL", "debug")
        logging_env.setenv("LOG_FILE", str(log_file))
        logger = setup_environment_logging()

        get_logger("src.scalars.lucas").debug("table built")
        for handler in logger.handlers:
            handler.flush()

        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 2
        assert "src.scalars.lucas - DEBUG - table built" in log_file.read_text()

    @pytest.mark.parametrize("env, propagates", [("test", True), ("development", False)])
    def test_propagation(self, logging_env, env, propagates):
        """Test that only the test environment hands records to the root logger"""
        logging_env.setenv("ENV_NAME", env)

        assert setup_environment_logging().propagate is propagates

    def test_repeated_setup(self, logging_env):
        """Test that setting up twice does not duplicate handlers"""
        setup_environment_logging()

        assert len(setup_environment_logging().handlers) == 1

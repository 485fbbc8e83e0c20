"""
Logging configuration for the Cartan workbench.

Library modules only call ``get_logger(__name__)``; ``setup_environment_logging``
decides where records of the ``src`` logger tree go.
"""

import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional

ROOT_LOGGER_NAME = "src"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
MAX_LOG_BYTES = 10 * 1024 * 1024  # 10MB
LOG_BACKUPS = 5


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None) -> logging.Logger:
    """
    Set up the ``src`` logger.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path of a rotating log file

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(getattr(logging, level.upper()))

    # Clear existing handlers to avoid duplicates
    logger.handlers.clear()

    formatter = logging.Formatter(LOG_FORMAT)

    # stdout is reserved for command output
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.handlers.RotatingFileHandler(log_file, maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS))

    for handler in handlers:
        handler.setLevel(logger.level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """Logger for a module of the workbench."""
    return logging.getLogger(name)


def setup_environment_logging() -> logging.Logger:
    """
    Set up logging based on environment variables.

    ``LOG_LEVEL`` picks the level; ``LOG_FILE`` adds a rotating file handler.
    Under ``ENV_NAME=test`` records propagate so pytest's capture sees them.

    Returns:
        Configured logger instance
    """
    logger = setup_logging(level=os.getenv("LOG_LEVEL", "WARNING"), log_file=os.getenv("LOG_FILE"))
    if os.getenv("ENV_NAME", "development") == "test":
        logger.propagate = True
    return logger


# Initialize default logger
_default_logger = setup_environment_logging()

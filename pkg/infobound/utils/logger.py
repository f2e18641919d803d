"""
Logging configuration.
Sets up structured logging for the library and command line.
"""

import logging
import sys
from typing import Any

from infobound.config import settings


def setup_logger() -> logging.Logger:
    """
    Setup and configure the package logger.

    Returns:
        logging.Logger: Configured logger instance
    """
    logger = logging.getLogger(settings.APP_NAME)
    logger.setLevel(getattr(logging, settings.LOG_LEVEL.upper()))
    logger.handlers.clear()

    # stdout is reserved for command output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, settings.LOG_LEVEL.upper()))

    if settings.DEBUG:
        formatter = logging.Formatter(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
    else:
        formatter = logging.Formatter(
            fmt='{"time":"%(asctime)s","name":"%(name)s","level":"%(levelname)s","message":"%(message)s"}',
            datefmt="%Y-%m-%dT%H:%M:%S"
        )

    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    logger.propagate = False

    return logger


# Global logger instance
logger = setup_logger()


def _with_context(message: str, **kwargs: Any) -> str:
    extra_info = " | ".join(f"{k}={v}" for k, v in kwargs.items() if v is not None)
    return f"{message} | {extra_info}" if extra_info else message


def log_info(message: str, **kwargs: Any):
    """Log info message with optional context."""
    logger.info(_with_context(message, **kwargs))


def log_error(message: str, **kwargs: Any):
    """Log error message with optional context."""
    logger.error(_with_context(message, **kwargs))


def log_warning(message: str, **kwargs: Any):
    """Log warning message with optional context."""
    logger.warning(_with_context(message, **kwargs))


def log_debug(message: str, **kwargs: Any):
    """Log debug message with optional context."""
    logger.debug(_with_context(message, **kwargs))

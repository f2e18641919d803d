"""Middleware module initialization."""

from infobound.middleware.error_handler import handle_command_errors
from infobound.middleware.logging import log_command

__all__ = ["handle_command_errors", "log_command"]

"""Utils module initialization."""

from infobound.utils.exceptions import (
    InfoBoundException,
    InvariantViolationError,
    DimensionMismatchError,
    ImpossibleOutcomeError,
    SingularOperatorError,
    NumericalConsistencyError,
    InstanceFormatError,
    ConfigurationError,
    OutputError,
    format_error,
)
from infobound.utils.logger import logger, log_info, log_error, log_warning, log_debug

__all__ = [
    "InfoBoundException",
    "InvariantViolationError",
    "DimensionMismatchError",
    "ImpossibleOutcomeError",
    "SingularOperatorError",
    "NumericalConsistencyError",
    "InstanceFormatError",
    "ConfigurationError",
    "OutputError",
    "format_error",
    "logger",
    "log_info",
    "log_error",
    "log_warning",
    "log_debug",
]

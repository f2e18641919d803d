"""
Custom exceptions for the library and CLI.
Every exception carries the exit code the command line maps it to.
"""

from datetime import datetime, timezone
from typing import Any, Dict, Optional


class InfoBoundException(Exception):
    """Base exception for infobound."""

    error_code: str = "INFOBOUND_ERROR"
    exit_code: int = 2

    def __init__(self, message: str = "infobound error"):
        self.message = message
        super().__init__(self.message)

    def details(self) -> Dict[str, Any]:
        """Structured context included in error payloads."""
        return {}


class InvariantViolationError(InfoBoundException):
    """Raised when a value breaks one of its type invariants."""

    error_code = "INVARIANT_VIOLATION"

    def __init__(self, invariant: str, residual: float, message: Optional[str] = None):
        self.invariant = invariant
        self.residual = float(residual)
        super().__init__(message or f"invariant '{invariant}' violated (residual {self.residual:.3e})")

    def details(self) -> Dict[str, Any]:
        return {"invariant": self.invariant, "residual": self.residual}


class DimensionMismatchError(InfoBoundException):
    """Raised when operands have incompatible dimensions."""

    error_code = "DIMENSION_MISMATCH"


class ImpossibleOutcomeError(InfoBoundException):
    """Raised when a post-measurement quantity is requested for a zero-probability outcome."""

    error_code = "IMPOSSIBLE_OUTCOME"

    def __init__(self, outcome: str, probability: float):
        self.outcome = outcome
        self.probability = float(probability)
        super().__init__(f"outcome {outcome} has probability {self.probability:.3e}")

    def details(self) -> Dict[str, Any]:
        return {"outcome": self.outcome, "probability": self.probability}


class SingularOperatorError(InfoBoundException):
    """Raised when an operator that must be inverted is (numerically) singular."""

    error_code = "SINGULAR_OPERATOR"

    def __init__(self, min_eigenvalue: float, message: Optional[str] = None):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(message or f"operator is singular (smallest eigenvalue {self.min_eigenvalue:.3e})")

    def details(self) -> Dict[str, Any]:
        return {"min_eigenvalue": self.min_eigenvalue}


class NumericalConsistencyError(InfoBoundException):
    """Raised when two independent evaluations of the same quantity disagree."""

    error_code = "NUMERICAL_INCONSISTENCY"
    exit_code = 1

    def __init__(self, quantity: str, residual: float):
        self.quantity = quantity
        self.residual = float(residual)
        super().__init__(f"{quantity} evaluations disagree by {self.residual:.3e}")

    def details(self) -> Dict[str, Any]:
        return {"quantity": self.quantity, "residual": self.residual}


class InstanceFormatError(InfoBoundException):
    """Raised when an instance file does not match the JSON schema."""

    error_code = "INSTANCE_FORMAT"

    def __init__(self, location: str, detail: str):
        self.location = location
        self.detail = detail
        super().__init__(f"{location}: {detail}")

    def details(self) -> Dict[str, Any]:
        return {"location": self.location}


class ConfigurationError(InfoBoundException):
    """Raised for invalid suite or generator parameters."""

    error_code = "INVALID_CONFIGURATION"


class OutputError(InfoBoundException):
    """Raised when results cannot be read or written."""

    error_code = "IO_ERROR"
    exit_code = 3


def format_error(
    error_code: str,
    message: str,
    exit_code: int,
    details: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """
    Create a formatted error payload.

    Args:
        error_code: Application-specific error code
        message: Human-readable error message
        exit_code: Process exit code that accompanies the error
        details: Additional structured context

    Returns:
        dict: Error payload
    """
    payload = {
        "error": {
            "code": error_code,
            "message": message,
            "exit_code": exit_code,
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
        }
    }
    if details:
        payload["error"]["details"] = details
    return payload

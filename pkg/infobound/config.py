"""
Application configuration using Pydantic Settings.
Loads numeric tolerances, suite defaults and logging options from the environment.
"""

from typing import Dict, List
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    APP_NAME: str = "infobound"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # State and measurement invariants
    HERMITIAN_TOL: float = 1e-10
    TRACE_TOL: float = 1e-10
    PSD_TOL: float = 1e-10
    COMPLETENESS_TOL: float = 1e-10
    ZERO_PROB_TOL: float = 1e-12
    PREFIX_TOL: float = 1e-12
    SINGULAR_TOL: float = 1e-12
    RECONSTRUCTION_TOL: float = 1e-9

    # Certified inequalities (bits)
    BOUND_TOL: float = 1e-9
    IDENTITY_TOL: float = 1e-8
    CLASSICAL_TOL: float = 1e-10

    # Eigensolver
    EIGENSOLVER: str = "lapack"  # lapack | jacobi
    JACOBI_TOL: float = 1e-12
    JACOBI_MAX_SWEEPS: int = 100

    # Sampling
    KRAUS_MAX_ATTEMPTS: int = 5

    # Suite defaults
    DEFAULT_SEED: int = 20240601
    DEFAULT_INSTANCES: int = 200
    BOUNDS_INSTANCES: int = 1000
    DEFAULT_DIMS: str = "2,3,4"  # Comma-separated list of dimensions
    SCHUR_PAIRS: int = 50
    WORKERS: int = 1

    # Approximately covariant measurements
    UC_SAMPLES: int = 512
    UC_TOLERANCE: float = 5e-3
    UC_CALIBRATION_ROTATIONS: int = 20
    UC_SAFETY_FACTOR: float = 2.0
    # Regression thresholds (bits) per "quantity:d", frozen from the calibration run
    UC_FROZEN_THRESHOLDS: Dict[str, float] = {
        "entropy-reduction:2": 5e-3,
        "entropy-reduction:3": 5e-3,
        "pure-ensemble-mutual-info:2": 5e-2,
        "pure-ensemble-mutual-info:3": 8e-2,
    }

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True
    )

    def get_default_dims(self) -> List[int]:
        """Parse default dimensions from comma-separated string."""
        return [int(dim.strip()) for dim in self.DEFAULT_DIMS.split(",") if dim.strip()]


# Global settings instance
settings = Settings()

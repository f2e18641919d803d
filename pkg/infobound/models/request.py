"""
Request schemas for the command line.
Suite configurations and instance-generation parameters with validation rules.
"""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from infobound.config import settings


MAX_DIM = 8
MAX_SEED = 2 ** 64 - 1


class SuiteKind(str, Enum):
    """Available verification suites."""
    BOUNDS = "bounds"
    CONCAVITY = "concavity"
    CLASSICAL_EQUALITY = "classical-equality"
    SCHUR_CLASSICAL = "schur-classical"
    SCHUR_UC = "schur-uc"
    DILATION = "dilation"
    ALL = "all"


class GenerateKind(str, Enum):
    """Instance generators."""
    RANDOM = "random"
    CLASSICAL = "classical"
    SYMMETRIC_CLASSICAL = "symmetric-classical"
    UC_APPROX = "uc-approx"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def parse_range(text: str) -> Tuple[int, int]:
    """Parse "lo:hi" or a single integer into an inclusive range."""
    text = str(text).strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        return int(lo), int(hi)
    value = int(text)
    return value, value


def parse_dims(text: str) -> List[int]:
    """Parse a comma-separated list of dimensions."""
    return [int(part.strip()) for part in str(text).split(",") if part.strip()]


def _check_range(name: str, value: Tuple[int, int], minimum: int) -> Tuple[int, int]:
    lo, hi = value
    if lo < minimum:
        raise ValueError(f"{name} lower end must be >= {minimum}, got {lo}")
    if hi < lo:
        raise ValueError(f"{name} range {lo}:{hi} is empty")
    return value


class SuiteConfig(BaseModel):
    """
    Configuration of one `run` invocation.
    Ranges are inclusive (lo, hi) pairs.
    """

    model_config = ConfigDict(frozen=True)

    suite: SuiteKind = Field(default=SuiteKind.ALL, description="Suite to run")
    dims: List[int] = Field(default_factory=settings.get_default_dims, description="Hilbert-space dimensions")
    n_instances: Optional[int] = Field(default=None, ge=1, description="Instances per suite; None for each suite's default")
    n_states: Tuple[int, int] = Field(default=(2, 4), description="Coding states per instance")
    n_kraus: Tuple[int, int] = Field(default=(2, 6), description="Kraus operators per measurement")
    n_groups: Tuple[int, int] = Field(default=(1, 6), description="Observed groups per measurement")
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0, le=MAX_SEED, description="Master seed")
    tolerance: Optional[float] = Field(default=None, gt=0.0, description="Override for BOUND_TOL")
    samples: int = Field(default=settings.UC_SAMPLES, ge=1, description="Haar samples for covariant measurements")
    schur_pairs: int = Field(default=settings.SCHUR_PAIRS, ge=1, description="Majorized pairs per Schur check")
    workers: int = Field(default=settings.WORKERS, ge=1, description="Concurrent instance evaluations")
    out: Optional[str] = Field(default=None, description="Output path")
    format: OutputFormat = Field(default=OutputFormat.CSV, description="Output format")

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v: List[int]) -> List[int]:
        """Each dimension in 2..MAX_DIM."""
        if not v:
            raise ValueError("at least one dimension is required")
        for dim in v:
            if dim < 2 or dim > MAX_DIM:
                raise ValueError(f"dimension {dim} outside 2..{MAX_DIM}")
        return v

    @field_validator("n_states", "n_kraus", "n_groups")
    @classmethod
    def validate_ranges(cls, v: Tuple[int, int], info) -> Tuple[int, int]:
        return _check_range(info.field_name, v, 1)

    @property
    def bound_tol(self) -> float:
        return self.tolerance if self.tolerance is not None else settings.BOUND_TOL

    def instances(self, default: int) -> int:
        return self.n_instances if self.n_instances is not None else default

    def suites(self) -> List[SuiteKind]:
        """Concrete suites this configuration expands to."""
        if self.suite == SuiteKind.ALL:
            return [kind for kind in SuiteKind if kind != SuiteKind.ALL]
        return [self.suite]


class GenerateParams(BaseModel):
    """Parameters of the `generate` verb."""

    model_config = ConfigDict(frozen=True)

    kind: GenerateKind
    dim: int = Field(default=2, ge=1, le=32)
    n_states: int = Field(default=2, ge=1)
    n_kraus: int = Field(default=2, ge=1)
    n_groups: int = Field(default=1, ge=1)
    samples: int = Field(default=settings.UC_SAMPLES, ge=1)
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0, le=MAX_SEED)
    prior: Optional[List[float]] = None
    kernel: Optional[str] = Field(default=None, description='"bsc:<p>", "erasure:<e>", "identity" or rows "a,b;c,d"')
    seed_op: str = Field(default="projector", description="projector | random")

    @model_validator(mode="after")
    def check_counts(self) -> "GenerateParams":
        if self.n_groups > self.n_kraus:
            raise ValueError(f"cannot split {self.n_kraus} operators into {self.n_groups} groups")
        if self.seed_op not in ("projector", "random"):
            raise ValueError(f"seed_op must be 'projector' or 'random', got {self.seed_op!r}")
        return self

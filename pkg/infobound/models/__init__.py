"""Models module initialization."""

from infobound.models.states import ProbVector, DensityMatrix, Ensemble, JointEnsemble
from infobound.models.measurement import GroupedMeasurement, OutcomeTable
from infobound.models.report import (
    BoundReport,
    SchurQuantity,
    SchurCheckReport,
    DilationCertificate,
    CheckOutcome,
    SuiteResult,
)
from infobound.models.request import SuiteKind, GenerateKind, OutputFormat, SuiteConfig, GenerateParams

__all__ = [
    "ProbVector",
    "DensityMatrix",
    "Ensemble",
    "JointEnsemble",
    "GroupedMeasurement",
    "OutcomeTable",
    "BoundReport",
    "SchurQuantity",
    "SchurCheckReport",
    "DilationCertificate",
    "CheckOutcome",
    "SuiteResult",
    "SuiteKind",
    "GenerateKind",
    "OutputFormat",
    "SuiteConfig",
    "GenerateParams",
]

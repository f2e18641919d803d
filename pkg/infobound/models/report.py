"""
Result schemas.
Bound reports, Schur-concavity check reports, proof certificates and suite results.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


CSV_COLUMNS = [
    "instance_id", "dim", "n_states", "n_groups", "efficient", "M", "chi",
    "sum_pj_chi_j", "dS", "gap_holevo", "gap_sww_theorem1", "gap_gen_hall", "gap_sww_fine",
]


class BoundReport(BaseModel):
    """
    Every information quantity of one (ensemble, measurement) pair and the
    signed gaps of the bounds on M. A gap is bound minus quantity, so a
    certified inequality reads gap >= -BOUND_TOL.
    """

    model_config = ConfigDict(frozen=True)

    dim: int
    n_states: int
    n_groups: int
    efficient: bool
    complete: bool

    mutual_info: float = Field(..., description="M(I:J) in bits")
    chi: float = Field(..., description="Holevo quantity of the encoding ensemble")
    chi_j: List[float] = Field(..., description="Holevo quantity of each posterior ensemble, 0 for impossible j")
    p_j: List[float]
    sum_pj_chi_j: float
    sum_pkj_chi_kj: float
    avg_entropy_reduction: float = Field(..., description="<dS(rho)> for the ensemble state")
    per_state_entropy_reductions: List[float]

    gap_holevo: float
    gap_sww_theorem1: float
    gap_gen_hall: float
    gap_sww_fine: float
    gap_hall: Optional[float] = Field(None, description="<dS(rho)> - M, efficient measurements only")
    ozawa_nonneg: Optional[bool] = Field(None, description="<dS(rho)> >= -BOUND_TOL, efficient measurements only")

    def csv_row(self, instance_id: int) -> List[Any]:
        """Values in CSV_COLUMNS order."""
        return [
            instance_id, self.dim, self.n_states, self.n_groups, self.efficient,
            self.mutual_info, self.chi, self.sum_pj_chi_j, self.avg_entropy_reduction,
            self.gap_holevo, self.gap_sww_theorem1, self.gap_gen_hall, self.gap_sww_fine,
        ]


class SchurQuantity(str, Enum):
    """Spectral function tested for Schur concavity."""
    ENTROPY_REDUCTION = "entropy-reduction"
    PURE_ENSEMBLE_MUTUAL_INFO = "pure-ensemble-mutual-info"


class SchurCheckReport(BaseModel):
    """Outcome of a Schur-concavity check over generated majorized pairs."""

    model_config = ConfigDict(frozen=True)

    quantity: SchurQuantity
    pairs_tested: int = Field(..., ge=0)
    violations: int = Field(..., ge=0)
    worst_violation: float = Field(..., description="min over pairs of f(sigma) - f(rho); negative means a violation direction")
    tolerance_used: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "SchurCheckReport") -> "SchurCheckReport":
        """Combine two checks of the same quantity by summation."""
        return SchurCheckReport(
            quantity=self.quantity,
            pairs_tested=self.pairs_tested + other.pairs_tested,
            violations=self.violations + other.violations,
            worst_violation=min(self.worst_violation, other.worst_violation),
            tolerance_used=max(self.tolerance_used, other.tolerance_used),
        )


class DilationCertificate(BaseModel):
    """
    Executable trace of the dilation argument behind M <= chi - sum_j P(j) chi_j.

    chi_Q -> chi_QA_dilated (isometry, equal) -> chi_QAM_prime (dephase A and
    correlate M, non-increasing) -> chi_QM_doubleprime (trace out A,
    non-increasing) which equals M + sum_j P(j) chi_j.
    """

    model_config = ConfigDict(frozen=True)

    chi_Q: float
    chi_QA_dilated: float
    chi_QAM_prime: float
    chi_QM_doubleprime: float
    mutual_info: float
    sum_pj_chi_j: float
    identity_residual: float = Field(..., description="|chi'' - (M + sum_j P(j) chi_j)|")
    identity_holds: bool
    bound_holds: bool
    chain_holds: bool

    @property
    def passed(self) -> bool:
        return self.identity_holds and self.bound_holds and self.chain_holds


class CheckOutcome(BaseModel):
    """Aggregate of one certified inequality over a suite."""

    name: str
    passed: bool
    count: int = 0
    failures: int = 0
    min_gap: Optional[float] = None
    tolerance: float

    @classmethod
    def from_gaps(cls, name: str, gaps: List[float], tolerance: float) -> "CheckOutcome":
        """pass iff every gap >= -tolerance."""
        failures = sum(1 for gap in gaps if gap < -tolerance)
        return cls(
            name=name,
            passed=failures == 0,
            count=len(gaps),
            failures=failures,
            min_gap=min(gaps) if gaps else None,
            tolerance=tolerance,
        )


class SuiteResult(BaseModel):
    """Rows, per-check outcomes and timing of one suite run."""

    suite: str
    seed: int
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    checks: List[CheckOutcome] = Field(default_factory=list)
    passed: bool = True
    wall_time_s: float = 0.0

    def failed_checks(self) -> List[CheckOutcome]:
        return [check for check in self.checks if not check.passed]

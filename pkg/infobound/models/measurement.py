"""
Measurement value types.
Grouped Kraus measurements (efficient and inefficient) and outcome tables.
"""

from typing import Any, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from infobound.config import settings
from infobound.core import linalg
from infobound.utils.exceptions import DimensionMismatchError, InvariantViolationError


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, copy=True)
    array.setflags(write=False)
    return array


class GroupedMeasurement(BaseModel):
    """
    Kraus operators A_{kj} partitioned into observed groups j.

    The observer learns the group j but not the position k inside it.
    Singleton groups make the measurement efficient.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    groups: Tuple[Tuple[np.ndarray, ...], ...] = Field(..., description="groups[j][k] = A_kj")
    operators: np.ndarray = Field(..., repr=False, description="All operators stacked in (j, k) order")
    group_index: np.ndarray = Field(..., repr=False, description="Group j of each stacked operator")
    position_index: np.ndarray = Field(..., repr=False, description="Position k of each stacked operator")

    @model_validator(mode="before")
    @classmethod
    def validate_groups(cls, data: Any) -> Any:
        raw_groups = data.get("groups") if isinstance(data, dict) else data
        if raw_groups is None or len(raw_groups) == 0:
            raise InvariantViolationError("non-empty", 0.0, "measurement has no outcome groups")

        groups = []
        for j, group in enumerate(raw_groups):
            if len(group) == 0:
                raise InvariantViolationError("non-empty", 0.0, f"outcome group {j} has no operators")
            ops = []
            for k, op in enumerate(group):
                matrix = linalg.as_complex_matrix(op, name=f"operator ({k}, {j})")
                linalg.require_square(matrix, name=f"operator ({k}, {j})")
                ops.append(_frozen(matrix))
            groups.append(tuple(ops))

        dims = {op.shape[0] for group in groups for op in group}
        if len(dims) != 1:
            raise DimensionMismatchError(f"measurement operators have mixed dimensions {sorted(dims)}")

        operators = np.stack([op for group in groups for op in group])
        residual = linalg.completeness_residual(operators)
        if residual > settings.COMPLETENESS_TOL:
            raise InvariantViolationError("completeness", residual)

        group_index = np.concatenate([np.full(len(g), j) for j, g in enumerate(groups)])
        position_index = np.concatenate([np.arange(len(g)) for g in groups])
        return {
            "groups": tuple(groups),
            "operators": _frozen(operators),
            "group_index": _frozen(group_index),
            "position_index": _frozen(position_index),
        }

    @classmethod
    def of(cls, groups: Sequence[Sequence[Any]]) -> "GroupedMeasurement":
        return cls(groups=groups)

    @classmethod
    def from_operators(cls, operators: Sequence[Any]) -> "GroupedMeasurement":
        """Singleton groups, one per operator."""
        return cls(groups=[[op] for op in operators])

    @classmethod
    def grouped(cls, operators: Sequence[Any], partition: Sequence[Sequence[int]]) -> "GroupedMeasurement":
        """Group a flat operator list by a partition of its indices."""
        return cls(groups=[[operators[n] for n in block] for block in partition])

    @property
    def dim(self) -> int:
        return int(self.operators.shape[-1])

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def n_operators(self) -> int:
        return int(self.operators.shape[0])

    @property
    def group_sizes(self) -> List[int]:
        return [len(group) for group in self.groups]

    def efficient(self) -> bool:
        """True iff every group holds exactly one operator."""
        return all(len(group) == 1 for group in self.groups)

    def complete(self, tol: float = 1e-9) -> bool:
        """True iff every operator has rank one (all post-measurement states pure)."""
        singular_values = np.linalg.svd(self.operators, compute_uv=False)
        scale = np.maximum(singular_values[:, :1], 1.0)
        return bool(np.all(np.count_nonzero(singular_values > tol * scale, axis=1) <= 1))

    def effects(self) -> np.ndarray:
        """A^dagger A for every stacked operator, shape (N, d, d)."""
        return np.einsum("nba,nbc->nac", self.operators.conj(), self.operators)

    def completeness_residual(self) -> float:
        return linalg.completeness_residual(self.operators)

    def refine(self) -> "GroupedMeasurement":
        """Every (k, j) pair becomes its own observed outcome."""
        return GroupedMeasurement.from_operators(list(self.operators))

    def merge(self) -> "GroupedMeasurement":
        """All operators in a single observed group."""
        return GroupedMeasurement(groups=[list(self.operators)])


class OutcomeTable(BaseModel):
    """
    Joint and conditional outcome statistics for one (ensemble, measurement) pair.

    Index layout: p_j_given_i[i, j], p_i_given_j[j, i], p_k_given_ji[i, j, k],
    p_ik_given_j[j, i, k]; the k axis is padded to the largest group with zeros.
    Rows conditioned on impossible events hold placeholder distributions.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p_i: np.ndarray
    p_j_given_i: np.ndarray
    p_j: np.ndarray
    p_i_given_j: np.ndarray
    p_k_given_ji: np.ndarray
    p_ik_given_j: np.ndarray
    p_kj_given_i: np.ndarray = Field(..., repr=False, description="P(k, j | i) indexed [i, j, k]")

    @property
    def n_states(self) -> int:
        return int(self.p_i.size)

    @property
    def n_outcomes(self) -> int:
        return int(self.p_j.size)

    def possible(self, j: int) -> bool:
        return bool(self.p_j[j] > settings.ZERO_PROB_TOL)

    def joint(self) -> np.ndarray:
        """P(i, j) indexed [i, j]."""
        return self.p_i[:, None] * self.p_j_given_i

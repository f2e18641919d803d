"""
State-level value types.
Probability vectors, density matrices and (joint) ensembles, validated on construction.
"""

from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from infobound.config import settings
from infobound.core import linalg
from infobound.utils.exceptions import DimensionMismatchError, InvariantViolationError


def _frozen_array(values: np.ndarray) -> np.ndarray:
    array = np.array(values, copy=True)
    array.setflags(write=False)
    return array


class ProbVector(BaseModel):
    """Non-negative reals summing to one."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: np.ndarray = Field(..., description="Probabilities, tiny negative drift clamped to 0")

    @model_validator(mode="before")
    @classmethod
    def validate_probs(cls, data: Any) -> Any:
        raw = data.get("probs") if isinstance(data, dict) else data
        probs = np.asarray(raw, dtype=float).ravel()
        if probs.size == 0:
            raise InvariantViolationError("non-empty", 0.0, "probability vector is empty")
        if not np.all(np.isfinite(probs)):
            raise InvariantViolationError("finite entries", float(np.count_nonzero(~np.isfinite(probs))))
        if probs.min() < -settings.ZERO_PROB_TOL:
            raise InvariantViolationError("non-negative probabilities", float(-probs.min()))
        total_residual = abs(float(probs.sum()) - 1.0)
        if total_residual > settings.TRACE_TOL:
            raise InvariantViolationError("unit total probability", total_residual)
        return {"probs": _frozen_array(np.clip(probs, 0.0, None))}

    @classmethod
    def of(cls, values: Iterable[float]) -> "ProbVector":
        return cls(probs=np.asarray(list(values), dtype=float))

    @classmethod
    def uniform(cls, n: int) -> "ProbVector":
        return cls(probs=np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.size


class DensityMatrix(BaseModel):
    """
    Positive semidefinite, unit-trace Hermitian matrix.

    Eigenvalues are computed once at validation; values in [-PSD_TOL, 0)
    are stored clamped to zero.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray = Field(..., description="dim x dim complex matrix")
    eigenvalues: np.ndarray = Field(..., repr=False, description="Clamped spectrum, ascending")

    @model_validator(mode="before")
    @classmethod
    def validate_state(cls, data: Any) -> Any:
        raw = data.get("matrix") if isinstance(data, dict) else data
        matrix = linalg.as_complex_matrix(raw, name="density matrix")
        linalg.require_hermitian(matrix, name="density matrix")

        trace_residual = abs(complex(np.trace(matrix)) - 1.0)
        if trace_residual > settings.TRACE_TOL:
            raise InvariantViolationError("unit trace", trace_residual)

        spectrum = linalg.clamp_spectrum(linalg.spectra(matrix))
        return {"matrix": _frozen_array(matrix), "eigenvalues": _frozen_array(spectrum)}

    @classmethod
    def of(cls, matrix) -> "DensityMatrix":
        return cls(matrix=matrix)

    @classmethod
    def from_unnormalized(cls, matrix) -> "DensityMatrix":
        """Hermitize and divide by the trace (for PSD operators built numerically)."""
        matrix = linalg.hermitize(np.asarray(matrix, dtype=np.complex128))
        return cls(matrix=matrix / np.real(np.trace(matrix)))

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(matrix=np.outer(psi, psi.conj()))

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        matrix = np.zeros((dim, dim), dtype=np.complex128)
        matrix[index, index] = 1.0
        return cls(matrix=matrix)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(matrix=np.eye(dim, dtype=np.complex128) / dim)

    @classmethod
    def diagonal(cls, probs: Sequence[float]) -> "DensityMatrix":
        return cls(matrix=np.diag(np.asarray(probs, dtype=np.complex128)))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.count_nonzero(self.eigenvalues > tol))


class Ensemble(BaseModel):
    """Encoding ensemble {P(i), rho_i} over a common dimension."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: ProbVector
    states: Tuple[DensityMatrix, ...]

    @model_validator(mode="before")
    @classmethod
    def coerce_members(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        probs = data.get("probs")
        if probs is not None and not isinstance(probs, ProbVector):
            data["probs"] = ProbVector(probs=probs)
        states = data.get("states")
        if states is not None:
            data["states"] = tuple(s if isinstance(s, DensityMatrix) else DensityMatrix(matrix=s) for s in states)
        return data

    @model_validator(mode="after")
    def check_members(self) -> "Ensemble":
        if len(self.states) != self.probs.size:
            raise DimensionMismatchError(
                f"{self.probs.size} probabilities for {len(self.states)} states"
            )
        dims = {state.dim for state in self.states}
        if len(dims) != 1:
            raise DimensionMismatchError(f"ensemble states have mixed dimensions {sorted(dims)}")
        return self

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[float, Any]]) -> "Ensemble":
        entries = list(entries)
        return cls(probs=[p for p, _ in entries], states=[s for _, s in entries])

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def entries(self) -> List[Tuple[float, DensityMatrix]]:
        return list(zip(self.probs.probs.tolist(), self.states))

    def stacked(self) -> np.ndarray:
        """States as an (n, d, d) array."""
        return np.stack([state.matrix for state in self.states])


class JointEnsemble(Ensemble):
    """Ensemble of states on a composite space with subsystem dimensions `dims`."""

    dims: Tuple[int, ...]

    @model_validator(mode="after")
    def check_subsystems(self) -> "JointEnsemble":
        if any(d < 1 for d in self.dims):
            raise DimensionMismatchError(f"subsystem dimensions must be positive, got {self.dims}")
        if int(np.prod(self.dims)) != self.dim:
            raise DimensionMismatchError(
                f"composite dimension {self.dim} is not the product of {self.dims}"
            )
        return self

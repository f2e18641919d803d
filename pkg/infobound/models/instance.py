"""
JSON instance schema.

    {"dim": d,
     "ensemble": [{"p": real, "state": [[[re, im], ...], ...]}, ...],
     "measurement": {"groups": [[matrix, ...], ...]}}

Complex entries are [re, im] pairs. Shape checks live here; the physical
invariants (trace, positivity, completeness) are applied when the instance
is converted to domain objects.
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from infobound.models.measurement import GroupedMeasurement
from infobound.models.states import Ensemble


ComplexPair = Tuple[float, float]
MatrixRows = List[List[ComplexPair]]


def to_array(rows: MatrixRows) -> np.ndarray:
    values = np.asarray(rows, dtype=float)
    return values[..., 0] + 1j * values[..., 1]


def to_rows(matrix: np.ndarray) -> MatrixRows:
    matrix = np.asarray(matrix, dtype=np.complex128)
    return [[(float(z.real), float(z.imag)) for z in row] for row in matrix]


class EnsembleEntry(BaseModel):
    p: float = Field(..., ge=0.0, le=1.0, description="Prior probability P(i)")
    state: MatrixRows = Field(..., description="Density matrix as rows of [re, im] pairs")


class MeasurementSpec(BaseModel):
    groups: List[List[MatrixRows]] = Field(..., min_length=1, description="groups[j][k] = A_kj")


class InstanceFile(BaseModel):
    """One (ensemble, measurement) instance as stored on disk."""

    dim: int = Field(..., ge=1)
    ensemble: List[EnsembleEntry] = Field(..., min_length=1)
    measurement: MeasurementSpec
    description: Optional[str] = None

    @model_validator(mode="after")
    def check_shapes(self) -> "InstanceFile":
        shape = (self.dim, self.dim)
        for i, entry in enumerate(self.ensemble):
            if _shape(entry.state) != shape:
                raise ValueError(f"ensemble[{i}].state has shape {_shape(entry.state)}, expected {shape}")
        for j, group in enumerate(self.measurement.groups):
            if not group:
                raise ValueError(f"measurement.groups[{j}] is empty")
            for k, op in enumerate(group):
                if _shape(op) != shape:
                    raise ValueError(f"measurement.groups[{j}][{k}] has shape {_shape(op)}, expected {shape}")
        return self

    def to_domain(self) -> Tuple[Ensemble, GroupedMeasurement]:
        """Validated ensemble and measurement."""
        ensemble = Ensemble(
            probs=[entry.p for entry in self.ensemble],
            states=[to_array(entry.state) for entry in self.ensemble],
        )
        measurement = GroupedMeasurement(
            groups=[[to_array(op) for op in group] for group in self.measurement.groups]
        )
        return ensemble, measurement

    @classmethod
    def from_domain(
        cls,
        ensemble: Ensemble,
        measurement: GroupedMeasurement,
        description: Optional[str] = None
    ) -> "InstanceFile":
        return cls(
            dim=ensemble.dim,
            ensemble=[
                EnsembleEntry(p=p, state=to_rows(state.matrix)) for p, state in ensemble.entries
            ],
            measurement=MeasurementSpec(
                groups=[[to_rows(op) for op in group] for group in measurement.groups]
            ),
            description=description,
        )


def _shape(rows: MatrixRows) -> Tuple[int, int]:
    if not rows:
        return (0, 0)
    widths = {len(row) for row in rows}
    return (len(rows), widths.pop() if len(widths) == 1 else -1)

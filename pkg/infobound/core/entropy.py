"""
Entropies and reduced states on validated value types.
"""

from typing import Union

import numpy as np

from infobound.core import linalg
from infobound.models.states import DensityMatrix, ProbVector
from infobound.utils.exceptions import DimensionMismatchError, InvariantViolationError


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -sum lambda log2 lambda over the clamped spectrum, in bits."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(matrix=rho)
    return linalg.entropy_bits(rho.eigenvalues)


def shannon_entropy(p: Union[ProbVector, np.ndarray]) -> float:
    """
    H[p] in bits, zero entries skipped.

    Raises:
        InvariantViolationError: If any entry is negative beyond ZERO_PROB_TOL
    """
    if not isinstance(p, ProbVector):
        values = np.asarray(p, dtype=float)
        if values.size and values.min() < 0.0:
            raise InvariantViolationError("non-negative probabilities", float(-values.min()))
        p = ProbVector(probs=values)
    return linalg.entropy_bits(p.probs)


def partial_trace(rho_ab: DensityMatrix, dim_a: int, dim_b: int, keep: str = "A") -> DensityMatrix:
    """
    Reduced state of a bipartite density matrix.

    Args:
        rho_ab: State on A (x) B
        dim_a: Dimension of A
        dim_b: Dimension of B
        keep: "A" or "B"

    Raises:
        DimensionMismatchError: If dim_a * dim_b differs from the state dimension
    """
    if not isinstance(rho_ab, DensityMatrix):
        rho_ab = DensityMatrix(matrix=rho_ab)
    if dim_a * dim_b != rho_ab.dim:
        raise DimensionMismatchError(f"state of dimension {rho_ab.dim} is not {dim_a} x {dim_b}")
    keep = keep.upper()
    if keep not in ("A", "B"):
        raise DimensionMismatchError(f"keep must be 'A' or 'B', got {keep!r}")
    reduced = linalg.reduce_state(rho_ab.matrix, (dim_a, dim_b), (0,) if keep == "A" else (1,))
    return DensityMatrix(matrix=linalg.hermitize(reduced))

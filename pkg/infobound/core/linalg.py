"""
Dense complex linear algebra kernel.
Hermitian eigendecomposition, entropies (in bits), tensor products,
partial traces and the matrix functions the measurement code relies on.

Everything here works on plain numpy arrays; the validated value types in
`infobound.models` are built on top of it.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla
from scipy.special import entr

from infobound.config import settings
from infobound.utils.exceptions import (
    DimensionMismatchError,
    InvariantViolationError,
    NumericalConsistencyError,
    SingularOperatorError,
)


LN2 = float(np.log(2.0))


# ==================== Validation helpers ====================

def as_complex_matrix(values, name: str = "matrix") -> np.ndarray:
    """
    Coerce input to a finite 2-D complex128 array.

    Raises:
        InvariantViolationError: If the input is not 2-D or has NaN/Inf entries
    """
    matrix = np.array(values, dtype=np.complex128)
    if matrix.ndim != 2:
        raise InvariantViolationError(
            "two-dimensional", float(matrix.ndim),
            f"{name} must be two-dimensional, got shape {matrix.shape}"
        )
    if not np.all(np.isfinite(matrix)):
        bad = int(np.count_nonzero(~np.isfinite(matrix)))
        raise InvariantViolationError("finite entries", float(bad), f"{name} has {bad} non-finite entries")
    return matrix


def require_square(matrix: np.ndarray, name: str = "matrix") -> None:
    """Raise if the matrix is not square."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvariantViolationError(
            "square", float(abs(matrix.shape[0] - matrix.shape[-1])),
            f"{name} must be square, got shape {matrix.shape}"
        )


def hermitian_residual(matrix: np.ndarray) -> float:
    """Largest entry of |M - M^dagger|."""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix - matrix.conj().swapaxes(-1, -2))))


def require_hermitian(matrix: np.ndarray, tol: Optional[float] = None, name: str = "matrix") -> None:
    """Raise InvariantViolationError unless the matrix is square and Hermitian within tol."""
    tol = settings.HERMITIAN_TOL if tol is None else tol
    require_square(matrix, name)
    residual = hermitian_residual(matrix)
    if residual > tol:
        raise InvariantViolationError("hermitian", residual, f"{name} is not Hermitian (residual {residual:.3e})")


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Return (M + M^dagger) / 2."""
    return 0.5 * (matrix + matrix.conj().swapaxes(-1, -2))


# ==================== Eigensolvers ====================

def jacobi_eigh(
    h: np.ndarray,
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation first removes the phase of the pivot a_pq and then applies
    the real symmetric Jacobi rotation, so one sweep visits every (p, q) pair.

    Args:
        h: Hermitian matrix
        tol: Convergence threshold on the off-diagonal Frobenius norm
        max_sweeps: Sweep limit

    Returns:
        Tuple of (eigenvalues ascending, unitary eigenvector matrix)

    Raises:
        NumericalConsistencyError: If the sweep limit is reached first, or
            V diag(values) V^H misses h by more than RECONSTRUCTION_TOL
    """
    tol = settings.JACOBI_TOL if tol is None else tol
    max_sweeps = settings.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps

    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    floor = np.finfo(float).eps * max(1.0, float(np.linalg.norm(a)))

    def off_norm(m: np.ndarray) -> float:
        return float(np.linalg.norm(m - np.diag(np.diag(m))))

    for _ in range(max_sweeps):
        off = off_norm(a)
        if off <= tol or off <= floor:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                phase = np.conj(apq / magnitude)
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                g = np.eye(n, dtype=np.complex128)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * phase
                g[q, q] = c * phase

                a = g.conj().T @ a @ g
                v = v @ g
    else:
        off = off_norm(a)
        if off > tol and off > floor:
            raise NumericalConsistencyError("jacobi off-diagonal norm", off)

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    values, v = values[order], v[:, order]

    residual = float(np.max(np.abs((v * values) @ v.conj().T - h)))
    if residual > settings.RECONSTRUCTION_TOL * max(1.0, float(np.max(np.abs(h)))):
        raise NumericalConsistencyError("jacobi reconstruction", residual)
    return values, v


def eigh(h) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    Returns:
        Tuple of (eigenvalues ascending, eigenvectors as columns)

    Raises:
        InvariantViolationError: Non-square or non-Hermitian input
    """
    matrix = as_complex_matrix(h)
    require_hermitian(matrix)
    matrix = hermitize(matrix)

    if settings.EIGENSOLVER == "jacobi":
        return jacobi_eigh(matrix)
    values, vectors = sla.eigh(matrix)
    return np.asarray(values, dtype=float), np.asarray(vectors, dtype=np.complex128)


def spectra(matrices: np.ndarray) -> np.ndarray:
    """
    Eigenvalues (ascending) of one Hermitian matrix or a stack of them.

    The caller is responsible for Hermiticity; the input is symmetrized first.
    """
    stack = hermitize(np.asarray(matrices, dtype=np.complex128))
    if settings.EIGENSOLVER == "jacobi":
        flat = stack.reshape((-1,) + stack.shape[-2:])
        values = np.array([jacobi_eigh(m)[0] for m in flat])
        return values.reshape(stack.shape[:-1])
    return np.linalg.eigvalsh(stack)


def clamp_spectrum(values: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    Clamp eigenvalues in [-tol, 0) to zero.

    Raises:
        InvariantViolationError: If any eigenvalue is below -tol
    """
    tol = settings.PSD_TOL if tol is None else tol
    values = np.asarray(values, dtype=float)
    if values.size and values.min() < -tol:
        raise InvariantViolationError("positive semidefinite", float(-values.min()))
    return np.clip(values, 0.0, None)


# ==================== Entropies ====================

def entropy_bits(values) -> float:
    """-sum x log2 x over non-negative values, with 0 log 0 = 0."""
    return float(np.sum(entr(np.asarray(values, dtype=float))) / LN2)


def spectral_entropies(matrices: np.ndarray, weights: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Von Neumann entropies (bits) of a stack of PSD matrices.

    When weights are given each matrix is divided by its weight before the
    entropy is taken; entries with zero weight get entropy 0. Eigenvalues
    below -PSD_TOL raise InvariantViolationError.
    """
    values = clamp_spectrum(spectra(matrices))
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        safe = np.where(weights > 0.0, weights, 1.0)
        values = values / safe[..., None]
        values = np.where(weights[..., None] > 0.0, values, 0.0)
    return np.sum(entr(values), axis=-1) / LN2


# ==================== Tensor structure ====================

def tensor(a, b) -> np.ndarray:
    """Kronecker product a (x) b."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def _check_dims(matrix: np.ndarray, dims: Sequence[int]) -> None:
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise DimensionMismatchError(
            f"matrix of shape {matrix.shape} does not match subsystem dims {tuple(dims)}"
        )


def reduce_state(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """
    Partial trace over every subsystem not listed in `keep`.

    Args:
        matrix: Operator on the composite space, subsystems ordered as `dims`
        dims: Subsystem dimensions
        keep: Indices of subsystems to keep, in output order

    Returns:
        np.ndarray: Reduced operator
    """
    dims = [int(d) for d in dims]
    keep = [int(k) for k in keep]
    _check_dims(matrix, dims)
    if any(k < 0 or k >= len(dims) for k in keep) or len(set(keep)) != len(keep):
        raise DimensionMismatchError(f"invalid subsystem selection {keep} for dims {dims}")

    n = len(dims)
    ket = [chr(ord("a") + i) for i in range(n)]
    bra = [chr(ord("A") + i) for i in range(n)]
    for i in range(n):
        if i not in keep:
            bra[i] = ket[i]
    out = "".join(ket[k] for k in keep) + "".join(bra[k] for k in keep)
    tensor_form = np.asarray(matrix).reshape(dims + dims)
    reduced = np.einsum("".join(ket) + "".join(bra) + "->" + out, tensor_form)
    kept = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(kept, kept)


def dephase(matrix: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    """Remove the coherences of one subsystem in its computational basis."""
    dims = [int(d) for d in dims]
    _check_dims(matrix, dims)
    n = len(dims)
    shape = [1] * (2 * n)
    shape[subsystem] = dims[subsystem]
    shape[n + subsystem] = dims[subsystem]
    mask = np.eye(dims[subsystem]).reshape(shape)
    total = int(np.prod(dims))
    return (np.asarray(matrix).reshape(dims + dims) * mask).reshape(total, total)


# ==================== Matrix functions ====================

def inverse_sqrt_psd(s, tol: Optional[float] = None) -> np.ndarray:
    """
    S^{-1/2} for a positive definite Hermitian S, via its eigendecomposition.

    Raises:
        SingularOperatorError: If the smallest eigenvalue is below tol
    """
    tol = settings.SINGULAR_TOL if tol is None else tol
    values, vectors = eigh(s)
    if values.min() < tol:
        raise SingularOperatorError(float(values.min()))
    return (vectors * (1.0 / np.sqrt(values))) @ vectors.conj().T


def completeness_residual(operators: np.ndarray) -> float:
    """max |sum_n A_n^dagger A_n - I| for a stack of operators (N, d, d)."""
    operators = np.asarray(operators, dtype=np.complex128)
    dim = operators.shape[-1]
    total = np.einsum("nba,nbc->ac", operators.conj(), operators)
    return float(np.max(np.abs(total - np.eye(dim))))

"""
Majorization service.
Majorization predicate, majorized-pair generation, symmetric classical and
approximately unitarily covariant measurements, and Schur-concavity checks.
"""

from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from infobound.config import settings
from infobound.core import linalg, sampling
from infobound.models.measurement import GroupedMeasurement
from infobound.models.report import SchurQuantity, SchurCheckReport
from infobound.models.states import DensityMatrix, Ensemble, ProbVector
from infobound.services import channel_service, information_service
from infobound.utils.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    SingularOperatorError,
)
from infobound.utils.logger import log_debug, log_info


def _as_prob_vector(p) -> ProbVector:
    return p if isinstance(p, ProbVector) else ProbVector(probs=p)


# ==================== Majorization ====================

def majorizes(p, q) -> bool:
    """
    True iff p majorizes q (q is more uncertain than p).

    Both vectors are sorted in descending order (the shorter one padded with
    zeros) and every prefix sum of p must dominate that of q up to PREFIX_TOL.
    """
    p, q = _as_prob_vector(p).probs, _as_prob_vector(q).probs
    size = max(p.size, q.size)
    p_sorted = np.sort(np.pad(p, (0, size - p.size)))[::-1]
    q_sorted = np.sort(np.pad(q, (0, size - q.size)))[::-1]
    if abs(p_sorted.sum() - q_sorted.sum()) > settings.TRACE_TOL:
        return False
    return bool(np.all(np.cumsum(p_sorted) >= np.cumsum(q_sorted) - settings.PREFIX_TOL))


def doubly_stochastic_mix(p: np.ndarray, perms: Sequence[np.ndarray], weights: Sequence[float]) -> np.ndarray:
    """sum_m w_m p[perm_m], a doubly stochastic image of p."""
    p = np.asarray(p, dtype=float)
    return np.sum([w * p[np.asarray(perm)] for w, perm in zip(weights, perms)], axis=0)


def random_majorized_pair(d: int, rng: np.random.Generator) -> Tuple[ProbVector, ProbVector]:
    """
    Random (p, q) with q majorized by p.

    q is a convex mixture of 3 to 8 random permutations of a Dirichlet p.
    """
    if d < 2:
        raise ConfigurationError(f"majorized pairs need d >= 2, got {d}")
    p = sampling.random_probabilities(d, rng)
    count = int(rng.integers(3, 9))
    weights = sampling.random_probabilities(count, rng)
    q = doubly_stochastic_mix(p, sampling.random_permutations(d, count, rng), weights)
    return ProbVector(probs=p), ProbVector(probs=q / q.sum())


# ==================== Measurement constructions ====================

def symmetric_classical_measurement(kernel, d: int) -> GroupedMeasurement:
    """
    Completely symmetric classical measurement generated by a kernel.

    One diagonal operator diag(sqrt(v)) per distinct permutation v of the
    kernel. Every value sits at every position equally often, so scaling by
    sqrt(d / n_distinct) makes the set complete.
    """
    kernel = _as_prob_vector(kernel).probs
    if kernel.size != d:
        raise DimensionMismatchError(f"kernel of length {kernel.size} for dimension {d}")
    patterns = sorted(set(permutations(kernel.tolist())), reverse=True)
    scale = np.sqrt(d / len(patterns))
    return GroupedMeasurement.from_operators(
        [scale * np.diag(np.sqrt(np.asarray(v))) for v in patterns]
    )


def uc_measurement_approx(
    seed_op,
    n_samples: int,
    rng: np.random.Generator,
    group_size: Optional[int] = None
) -> GroupedMeasurement:
    """
    Finite approximation of a unitarily covariant measurement.

    Draws Haar unitaries U_u, forms C_u = U_u A U_u^dagger and whitens them,
    B_u = C_u S^{-1/2} with S = sum_u C_u^dagger C_u, so completeness is
    exact for every sample count.

    Args:
        seed_op: Seed operator A (d x d)
        n_samples: Number of Haar samples, at least d^2
        rng: Generator
        group_size: Optional size of observed groups of consecutive samples
            (inefficient variant); singleton groups when omitted

    Raises:
        SingularOperatorError: If every attempt produced a singular S
    """
    seed_op = linalg.as_complex_matrix(seed_op, name="seed operator")
    linalg.require_square(seed_op, name="seed operator")
    d = seed_op.shape[0]
    if n_samples < d * d:
        raise ConfigurationError(f"need at least d^2 = {d * d} samples, got {n_samples}")

    last_error = None
    for attempt in range(settings.KRAUS_MAX_ATTEMPTS):
        unitaries = np.stack([sampling.haar_unitary(d, rng) for _ in range(n_samples)])
        rotated = np.einsum("uab,bc,udc->uad", unitaries, seed_op, unitaries.conj())
        try:
            whitening = linalg.inverse_sqrt_psd(np.einsum("uba,ubc->ac", rotated.conj(), rotated))
        except SingularOperatorError as e:
            last_error = e
            log_debug("Singular covariant normalization, redrawing", attempt=attempt, d=d)
            continue
        operators = list(rotated @ whitening)
        if not group_size or group_size == 1:
            return GroupedMeasurement.from_operators(operators)
        blocks = [list(range(start, min(start + group_size, n_samples)))
                  for start in range(0, n_samples, group_size)]
        return GroupedMeasurement.grouped(operators, blocks)
    raise last_error


def mix_measurements(measurements: Sequence[GroupedMeasurement], weights) -> GroupedMeasurement:
    """
    Sample measurement m with probability w_m and record which one ran.

    Operators of measurement m are scaled by sqrt(w_m) and groups are
    concatenated, so the outcome labels of different components stay disjoint.
    """
    weights = _as_prob_vector(weights).probs
    if len(measurements) != weights.size:
        raise DimensionMismatchError(f"{weights.size} weights for {len(measurements)} measurements")
    dims = {meas.dim for meas in measurements}
    if len(dims) != 1:
        raise DimensionMismatchError(f"cannot mix measurements of dimensions {sorted(dims)}")

    groups: List[List[np.ndarray]] = []
    for w, meas in zip(weights, measurements):
        if w <= settings.ZERO_PROB_TOL:
            continue
        groups.extend([[np.sqrt(w) * op for op in group] for group in meas.groups])
    return GroupedMeasurement(groups=groups)


# ==================== Spectral embeddings ====================

def eigen_ensemble(rho: DensityMatrix) -> Ensemble:
    """Pure-state ensemble {lambda_k, |phi_k>} of rho, zero eigenvalues dropped."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(matrix=rho)
    values, vectors = linalg.eigh(rho.matrix)
    keep = np.flatnonzero(values > settings.ZERO_PROB_TOL)
    probs = values[keep] / values[keep].sum()
    return Ensemble(
        probs=probs,
        states=[DensityMatrix.pure(vectors[:, k]) for k in keep],
    )


def embed_spectrum(p, basis: Optional[np.ndarray] = None) -> DensityMatrix:
    """Density matrix U diag(p) U^dagger (computational basis when U is omitted)."""
    p = _as_prob_vector(p).probs
    if basis is None:
        return DensityMatrix.diagonal(p)
    basis = np.asarray(basis, dtype=np.complex128)
    return DensityMatrix(matrix=linalg.hermitize((basis * p) @ basis.conj().T))


# ==================== Schur-concavity checks ====================

def schur_function(meas: GroupedMeasurement, quantity: SchurQuantity) -> Callable[[DensityMatrix], float]:
    """Spectral function of a density matrix under a fixed measurement."""
    quantity = SchurQuantity(quantity)
    if quantity == SchurQuantity.ENTROPY_REDUCTION:
        return lambda rho: information_service.avg_entropy_reduction(rho, meas)

    def pure_ensemble_mutual_info(rho: DensityMatrix) -> float:
        eps = eigen_ensemble(rho)
        return information_service.mutual_information(channel_service.outcome_table(eps, meas), eps.probs)

    return pure_ensemble_mutual_info


def _is_diagonal(meas: GroupedMeasurement) -> bool:
    off_diagonal = meas.operators * (1.0 - np.eye(meas.dim))
    return bool(np.max(np.abs(off_diagonal)) <= settings.HERMITIAN_TOL)


def schur_check(
    meas: GroupedMeasurement,
    quantity: SchurQuantity,
    n_pairs: int,
    tol: float,
    rng: np.random.Generator,
    allow_inefficient: bool = False
) -> SchurCheckReport:
    """
    Test f(sigma) >= f(rho) - tol over generated pairs spec(sigma) < spec(rho).

    Diagonal measurements get classical (diagonal) embeddings; otherwise
    each state is embedded in its own Haar-random basis.

    Raises:
        ConfigurationError: For inefficient measurements unless allow_inefficient
    """
    if not meas.efficient() and not allow_inefficient:
        raise ConfigurationError("Schur checks require an efficient measurement")
    f = schur_function(meas, quantity)
    classical = _is_diagonal(meas)
    d = meas.dim

    violations = 0
    worst = np.inf
    for _ in range(n_pairs):
        p, q = random_majorized_pair(d, rng)
        if classical:
            rho, sigma = embed_spectrum(p), embed_spectrum(q)
        else:
            rho = embed_spectrum(p, sampling.haar_unitary(d, rng))
            sigma = embed_spectrum(q, sampling.haar_unitary(d, rng))
        diff = f(sigma) - f(rho)
        worst = min(worst, diff)
        if diff < -tol:
            violations += 1

    return SchurCheckReport(
        quantity=SchurQuantity(quantity),
        pairs_tested=n_pairs,
        violations=violations,
        worst_violation=float(worst) if n_pairs else 0.0,
        tolerance_used=tol,
    )


def covariance_residual(
    meas: GroupedMeasurement,
    quantity: SchurQuantity,
    n_rotations: int,
    rng: np.random.Generator,
    rho: Optional[DensityMatrix] = None
) -> float:
    """max over Haar V of |f(V rho V^dagger) - f(rho)| for a random (or given) rho."""
    f = schur_function(meas, quantity)
    if rho is None:
        rho = DensityMatrix(matrix=sampling.random_density(meas.dim, rng))
    base = f(rho)
    residual = 0.0
    for _ in range(n_rotations):
        v = sampling.haar_unitary(meas.dim, rng)
        rotated = DensityMatrix(matrix=linalg.hermitize(v @ rho.matrix @ v.conj().T))
        residual = max(residual, abs(f(rotated) - base))
    return residual


def calibrated_tolerance(
    meas: GroupedMeasurement,
    quantity: SchurQuantity,
    rng: np.random.Generator,
    n_rotations: Optional[int] = None
) -> float:
    """max(UC_TOLERANCE, UC_SAFETY_FACTOR x measured covariance residual)."""
    n_rotations = settings.UC_CALIBRATION_ROTATIONS if n_rotations is None else n_rotations
    residual = covariance_residual(meas, quantity, n_rotations, rng)
    tolerance = max(settings.UC_TOLERANCE, settings.UC_SAFETY_FACTOR * residual)
    log_info("Calibrated covariance tolerance", quantity=SchurQuantity(quantity).value,
             residual=f"{residual:.3e}", tolerance=f"{tolerance:.3e}")
    return tolerance


def threshold_key(quantity: SchurQuantity, d: int) -> str:
    return f"{SchurQuantity(quantity).value}:{d}"


def frozen_threshold(quantity: SchurQuantity, d: int) -> float:
    """
    Regression threshold (bits) for sampled covariant measurements in dimension d.

    Raises:
        ConfigurationError: If UC_FROZEN_THRESHOLDS has no entry for (quantity, d)
    """
    key = threshold_key(quantity, d)
    try:
        return float(settings.UC_FROZEN_THRESHOLDS[key])
    except KeyError:
        raise ConfigurationError(f"no frozen covariance threshold for '{key}'; calibrate d={d} first") from None


def calibrate_thresholds(
    dims: Sequence[int],
    n_samples: int,
    n_measurements: int,
    rng: np.random.Generator,
    n_rotations: Optional[int] = None
) -> Dict[str, float]:
    """
    Calibration run for UC_FROZEN_THRESHOLDS.

    For every d and tested quantity, takes the largest calibrated tolerance
    over n_measurements fresh projector-seeded covariant measurements.

    Returns:
        Dict keyed "quantity:d", ready to be frozen in settings
    """
    thresholds: Dict[str, float] = {}
    for d in dims:
        seed_op = np.zeros((d, d))
        seed_op[0, 0] = 1.0
        for _ in range(n_measurements):
            meas = uc_measurement_approx(seed_op, max(n_samples, d * d), rng)
            for quantity in SchurQuantity:
                key = threshold_key(quantity, d)
                tol = calibrated_tolerance(meas, quantity, rng, n_rotations)
                thresholds[key] = max(thresholds.get(key, 0.0), tol)
    log_info("Covariance calibration finished", thresholds=thresholds)
    return thresholds

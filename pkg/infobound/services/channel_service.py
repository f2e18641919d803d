"""
Channel model service.
Ensemble states, outcome statistics, post-measurement states and the
classical embedding of a discrete channel.
"""

from typing import List, Sequence, Tuple

import numpy as np

from infobound.config import settings
from infobound.core import linalg
from infobound.models.measurement import GroupedMeasurement, OutcomeTable
from infobound.models.states import DensityMatrix, Ensemble, ProbVector
from infobound.utils.exceptions import (
    DimensionMismatchError,
    ImpossibleOutcomeError,
    InvariantViolationError,
)


def require_same_dim(eps: Ensemble, meas: GroupedMeasurement) -> None:
    """Raise DimensionMismatchError unless ensemble and measurement act on the same space."""
    if eps.dim != meas.dim:
        raise DimensionMismatchError(f"ensemble dimension {eps.dim} != measurement dimension {meas.dim}")


def branches(matrix: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """A rho A^dagger for every stacked operator, shape (N, d, d)."""
    ops = meas.operators
    return np.einsum("nab,bc,ndc->nad", ops, matrix, ops.conj())


def group_indicator(meas: GroupedMeasurement) -> np.ndarray:
    """0/1 matrix of shape (n_groups, N) mapping stacked operators to their group."""
    indicator = np.zeros((meas.n_groups, meas.n_operators))
    indicator[meas.group_index, np.arange(meas.n_operators)] = 1.0
    return indicator


def group_branches(matrix: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """sum_k A_kj rho A_kj^dagger for every group j, shape (n_groups, d, d)."""
    return np.einsum("jn,nad->jad", group_indicator(meas), branches(matrix, meas))


def state_group_branches(states: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """group_branches for a stack of states, shape (n_states, n_groups, d, d)."""
    ops = meas.operators
    per_operator = np.einsum("nab,ibc,ndc->inad", ops, states, ops.conj())
    return np.einsum("jn,inad->ijad", group_indicator(meas), per_operator)


def non_selective_output(matrix: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """sum_kj A_kj rho A_kj^dagger."""
    return branches(matrix, meas).sum(axis=0)


def ensemble_state(eps: Ensemble) -> DensityMatrix:
    """rho = sum_i P(i) rho_i."""
    mixture = np.einsum("i,iab->ab", eps.probs.probs, eps.stacked())
    return DensityMatrix(matrix=linalg.hermitize(mixture))


def _trace_effects(states: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """Tr[A_n^dagger A_n rho_i] indexed [i, n]."""
    return np.real(np.einsum("nab,iba->in", meas.effects(), states))


def outcome_table(eps: Ensemble, meas: GroupedMeasurement) -> OutcomeTable:
    """
    Outcome statistics for an ensemble read out by a grouped measurement.

    P(k, j | i) = Tr[A_kj^dagger A_kj rho_i]; P(j | i) sums over k; the
    remaining tables follow by Bayes. Conditionals on events of probability
    at most ZERO_PROB_TOL hold placeholders (prior for P(i|j), uniform over
    the group for P(k|j,i)) so every stored row is a distribution.
    """
    require_same_dim(eps, meas)
    tol = settings.ZERO_PROB_TOL
    prior = eps.probs.probs
    n_states, n_groups = eps.size, meas.n_groups
    width = max(meas.group_sizes)

    flat = _trace_effects(eps.stacked(), meas)
    if flat.min() < -tol:
        raise InvariantViolationError("non-negative outcome probabilities", float(-flat.min()))
    flat = np.clip(flat, 0.0, None)

    p_kj_given_i = np.zeros((n_states, n_groups, width))
    p_kj_given_i[:, meas.group_index, meas.position_index] = flat

    p_j_given_i = p_kj_given_i.sum(axis=2)
    p_j = prior @ p_j_given_i

    sizes = np.asarray(meas.group_sizes, dtype=float)
    members = np.arange(width)[None, :] < sizes[:, None]  # [j, k]
    uniform_k = members / sizes[:, None]

    possible_j = p_j > tol
    safe_j = np.where(possible_j, p_j, 1.0)
    p_i_given_j = np.where(
        possible_j[:, None], (prior[:, None] * p_j_given_i).T / safe_j[:, None], prior[None, :]
    )
    p_ik_given_j = np.where(
        possible_j[:, None, None],
        np.transpose(prior[:, None, None] * p_kj_given_i, (1, 0, 2)) / safe_j[:, None, None],
        prior[None, :, None] * uniform_k[:, None, :],
    )

    possible_ji = p_j_given_i > tol
    safe_ji = np.where(possible_ji, p_j_given_i, 1.0)
    p_k_given_ji = np.where(
        possible_ji[:, :, None],
        p_kj_given_i / safe_ji[:, :, None],
        np.broadcast_to(uniform_k[None, :, :], p_kj_given_i.shape),
    )

    return OutcomeTable(
        p_i=prior.copy(),
        p_j_given_i=p_j_given_i,
        p_j=p_j,
        p_i_given_j=p_i_given_j,
        p_k_given_ji=p_k_given_ji,
        p_ik_given_j=p_ik_given_j,
        p_kj_given_i=p_kj_given_i,
    )


def post_state(eps: Ensemble, meas: GroupedMeasurement, i: int, j: int) -> DensityMatrix:
    """
    sigma_{j|i} = sum_k A_kj rho_i A_kj^dagger / P(j|i).

    Raises:
        ImpossibleOutcomeError: If P(j|i) <= ZERO_PROB_TOL
    """
    require_same_dim(eps, meas)
    branch = group_branches(eps.states[i].matrix, meas)[j]
    weight = float(np.real(np.trace(branch)))
    if weight <= settings.ZERO_PROB_TOL:
        raise ImpossibleOutcomeError(f"j={j} given i={i}", weight)
    return DensityMatrix(matrix=linalg.hermitize(branch) / weight)


def receiver_state(eps: Ensemble, meas: GroupedMeasurement, j: int) -> DensityMatrix:
    """
    sigma_j = sum_k A_kj rho A_kj^dagger / P(j) for the ensemble state rho.

    Raises:
        ImpossibleOutcomeError: If P(j) <= ZERO_PROB_TOL
    """
    require_same_dim(eps, meas)
    branch = group_branches(ensemble_state(eps).matrix, meas)[j]
    weight = float(np.real(np.trace(branch)))
    if weight <= settings.ZERO_PROB_TOL:
        raise ImpossibleOutcomeError(f"j={j}", weight)
    return DensityMatrix(matrix=linalg.hermitize(branch) / weight)


def posterior_ensemble(eps: Ensemble, meas: GroupedMeasurement, j: int) -> Ensemble:
    """
    The ensemble {P(i|j), sigma_{j|i}} left after observing j.

    States that cannot lead to j are carried with probability 0 and the
    maximally mixed state as placeholder.

    Raises:
        ImpossibleOutcomeError: If P(j) <= ZERO_PROB_TOL
    """
    require_same_dim(eps, meas)
    tol = settings.ZERO_PROB_TOL
    table = outcome_table(eps, meas)
    if table.p_j[j] <= tol:
        raise ImpossibleOutcomeError(f"j={j}", float(table.p_j[j]))

    probs = table.p_i_given_j[j].copy()
    states: List[DensityMatrix] = []
    placeholder = DensityMatrix.maximally_mixed(eps.dim)
    selected = state_group_branches(eps.stacked(), meas)[:, j]
    for i, branch in enumerate(selected):
        weight = float(np.real(np.trace(branch)))
        if probs[i] <= tol:
            probs[i] = 0.0
            states.append(placeholder)
        elif weight <= tol:
            states.append(placeholder)
        else:
            states.append(DensityMatrix(matrix=linalg.hermitize(branch) / weight))
    return Ensemble(probs=probs / probs.sum(), states=states)


def unitary_measurement(u) -> GroupedMeasurement:
    """Deterministic evolution rho -> U rho U^dagger as a one-outcome measurement."""
    return GroupedMeasurement(groups=[[np.asarray(u, dtype=np.complex128)]])


def identity_measurement(dim: int) -> GroupedMeasurement:
    return unitary_measurement(np.eye(dim))


def projective_measurement(basis: np.ndarray) -> GroupedMeasurement:
    """Rank-one projectors onto the columns of a unitary, one outcome each."""
    basis = np.asarray(basis, dtype=np.complex128)
    return GroupedMeasurement.from_operators(
        [np.outer(basis[:, k], basis[:, k].conj()) for k in range(basis.shape[1])]
    )


def classical_channel(prior: ProbVector, kernel) -> Tuple[Ensemble, GroupedMeasurement]:
    """
    Embed a discrete memoryless channel as commuting quantum objects.

    Args:
        prior: Input distribution P(i)
        kernel: Row-stochastic matrix kernel[i, j] = P(j | i)

    Returns:
        Tuple of (ensemble of basis projectors, diagonal measurement with
        A_j = diag_i sqrt(kernel[i, j]))

    Raises:
        InvariantViolationError: If the kernel is not row-stochastic
    """
    kernel = np.asarray(kernel, dtype=float)
    if kernel.ndim != 2 or kernel.shape[0] != prior.size:
        raise DimensionMismatchError(
            f"kernel of shape {kernel.shape} does not match a prior of length {prior.size}"
        )
    for row in kernel:
        ProbVector(probs=row)

    dim = prior.size
    ensemble = Ensemble(
        probs=prior,
        states=[DensityMatrix.basis(dim, i) for i in range(dim)],
    )
    operators = [np.diag(np.sqrt(np.clip(kernel[:, j], 0.0, None))) for j in range(kernel.shape[1])]
    return ensemble, GroupedMeasurement.from_operators(operators)


def parse_kernel(spec: str, dim: int) -> np.ndarray:
    """
    Parse a kernel description.

    Accepted forms: "bsc:<flip>" (binary symmetric), "identity",
    "erasure:<e>" (binary erasure, two inputs, three outputs) and
    explicit rows "a,b;c,d".
    """
    spec = spec.strip()
    if spec.startswith("bsc:"):
        flip = float(spec.split(":", 1)[1])
        return np.array([[1.0 - flip, flip], [flip, 1.0 - flip]])
    if spec.startswith("erasure:"):
        e = float(spec.split(":", 1)[1])
        return np.array([[1.0 - e, 0.0, e], [0.0, 1.0 - e, e]])
    if spec == "identity":
        return np.eye(dim)
    rows = [[float(x) for x in row.split(",")] for row in spec.split(";") if row.strip()]
    return np.array(rows)


def mixture_states(weights: Sequence[float], states: Sequence[DensityMatrix]) -> DensityMatrix:
    """sum_m w_m rho_m as a density matrix."""
    return ensemble_state(Ensemble(probs=list(weights), states=list(states)))

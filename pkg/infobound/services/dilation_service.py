"""
Dilation service.
Stinespring dilation of grouped measurements and the executable
certificate for the bound M <= chi - sum_j P(j) chi_j.
"""

from typing import Sequence, Tuple

import numpy as np

from infobound.config import settings
from infobound.core import linalg
from infobound.models.measurement import GroupedMeasurement
from infobound.models.report import DilationCertificate
from infobound.models.states import DensityMatrix, Ensemble, JointEnsemble
from infobound.services import channel_service, information_service
from infobound.utils.exceptions import DimensionMismatchError
from infobound.utils.logger import log_debug


def dilate(meas: GroupedMeasurement) -> np.ndarray:
    """
    Isometry V = sum_kj |kj> (x) A_kj from Q into A (x) Q.

    The ancilla A has one basis state per stacked operator and comes first
    in the tensor order, so V has shape (N * d, d).
    """
    return meas.operators.reshape(meas.n_operators * meas.dim, meas.dim)


def isometry_residual(v: np.ndarray) -> float:
    """max |V^dagger V - I|."""
    return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def dilated_probabilities(rho: DensityMatrix, meas: GroupedMeasurement) -> np.ndarray:
    """Diagonal of the A marginal of V rho V^dagger: P(k, j) in stacked order."""
    v = dilate(meas)
    joint = v @ rho.matrix @ v.conj().T
    marginal = linalg.reduce_state(joint, (meas.n_operators, meas.dim), (0,))
    return np.real(np.diag(marginal))


def _joint_ensemble(probs, matrices: Sequence[np.ndarray], dims: Sequence[int]) -> JointEnsemble:
    return JointEnsemble(
        probs=probs,
        states=[DensityMatrix(matrix=linalg.hermitize(m)) for m in matrices],
        dims=tuple(dims),
    )


def chi_partial_trace_check(je: JointEnsemble, traced_subsystem: int) -> Tuple[float, float]:
    """
    Holevo quantity before and after tracing out one subsystem.

    Returns:
        Tuple of (chi_before, chi_after); chi_after <= chi_before is the
        monotonicity being exercised

    Raises:
        DimensionMismatchError: For an invalid subsystem index
    """
    n = len(je.dims)
    if traced_subsystem < 0 or traced_subsystem >= n:
        raise DimensionMismatchError(f"no subsystem {traced_subsystem} in dims {je.dims}")
    keep = [s for s in range(n) if s != traced_subsystem]
    reduced = Ensemble(
        probs=je.probs,
        states=[
            DensityMatrix(matrix=linalg.hermitize(linalg.reduce_state(state.matrix, je.dims, keep)))
            for state in je.states
        ],
    )
    return information_service.holevo_chi(je), information_service.holevo_chi(reduced)


def chi_unitary_invariance(eps: Ensemble, u: np.ndarray) -> float:
    """|chi(U rho_i U^dagger) - chi(rho_i)| for a unitary shared by every member."""
    u = np.asarray(u, dtype=np.complex128)
    rotated = Ensemble(
        probs=eps.probs,
        states=[DensityMatrix(matrix=linalg.hermitize(u @ s.matrix @ u.conj().T)) for s in eps.states],
    )
    return abs(information_service.holevo_chi(rotated) - information_service.holevo_chi(eps))


def _correlate_register(dephased: np.ndarray, meas: GroupedMeasurement) -> np.ndarray:
    """
    Write the observed group j(k, j) into a register M, giving a state on M (x) A (x) Q.

    The input must already be diagonal in the A basis; each A block is copied
    into the M block of its group.
    """
    g, n, d = meas.n_groups, meas.n_operators, meas.dim
    blocks = dephased.reshape(n, d, n, d)
    joint = np.zeros((g, n, d, g, n, d), dtype=np.complex128)
    for index, group in enumerate(meas.group_index):
        joint[group, index, :, group, index, :] = blocks[index, :, index, :]
    return joint.reshape(g * n * d, g * n * d)


def theorem1_trace(eps: Ensemble, meas: GroupedMeasurement) -> DilationCertificate:
    """
    Follow the dilation argument step by step and record every Holevo quantity.

    Q is dilated into A (x) Q, A is dephased, the observed group is copied
    into M and finally A is traced out. The last Holevo quantity must equal
    M(I:J) + sum_j P(j) chi_j, computed separately from the outcome
    statistics and posterior ensembles.
    """
    channel_service.require_same_dim(eps, meas)
    g, n, d = meas.n_groups, meas.n_operators, meas.dim
    v = dilate(meas)

    dilated = [v @ state.matrix @ v.conj().T for state in eps.states]
    dephased = [linalg.dephase(m, (n, d), 0) for m in dilated]
    correlated = [_correlate_register(m, meas) for m in dephased]
    traced = [linalg.reduce_state(m, (g, n, d), (0, 2)) for m in correlated]

    chi_q = information_service.holevo_chi(eps)
    chi_qa = information_service.holevo_chi(_joint_ensemble(eps.probs, dilated, (n, d)))
    chi_qam = information_service.holevo_chi(_joint_ensemble(eps.probs, correlated, (g, n, d)))
    chi_qm = information_service.holevo_chi(_joint_ensemble(eps.probs, traced, (g, d)))

    report = information_service.bound_report(eps, meas)
    target = report.mutual_info + report.sum_pj_chi_j
    residual = abs(chi_qm - target)

    bound_tol, identity_tol = settings.BOUND_TOL, settings.IDENTITY_TOL
    log_debug("Dilation chain", chi_q=chi_q, chi_qa=chi_qa, chi_qam=chi_qam, chi_qm=chi_qm, residual=residual)
    return DilationCertificate(
        chi_Q=chi_q,
        chi_QA_dilated=chi_qa,
        chi_QAM_prime=chi_qam,
        chi_QM_doubleprime=chi_qm,
        mutual_info=report.mutual_info,
        sum_pj_chi_j=report.sum_pj_chi_j,
        identity_residual=residual,
        identity_holds=residual <= identity_tol,
        bound_holds=chi_qm <= chi_q + bound_tol,
        chain_holds=(
            abs(chi_qa - chi_q) <= identity_tol
            and chi_qam <= chi_qa + bound_tol
            and chi_qm <= chi_qam + bound_tol
        ),
    )

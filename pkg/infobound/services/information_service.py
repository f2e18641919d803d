"""
Information quantities service.
Mutual information, Holevo quantities, average entropy reduction and the
signed-gap bound report.
"""

from typing import Sequence

import numpy as np

from infobound.config import settings
from infobound.core import linalg
from infobound.models.measurement import GroupedMeasurement, OutcomeTable
from infobound.models.report import BoundReport
from infobound.models.states import DensityMatrix, Ensemble, ProbVector
from infobound.services import channel_service
from infobound.utils.exceptions import DimensionMismatchError, NumericalConsistencyError


def _drop_impossible(weights: np.ndarray) -> np.ndarray:
    return np.where(weights > settings.ZERO_PROB_TOL, weights, 0.0)


# ==================== Mutual information ====================

def mutual_information_standard(table: OutcomeTable) -> float:
    """H[I] + H[J] - H[I, J] in bits."""
    return (
        linalg.entropy_bits(table.p_i)
        + linalg.entropy_bits(table.p_j)
        - linalg.entropy_bits(table.joint().ravel())
    )


def mutual_information(table: OutcomeTable, prior: ProbVector) -> float:
    """
    M(I:J) = H[P(j)] - sum_i P(i) H[P(j|i)], in bits.

    The standard form is evaluated too and the two must agree within
    CLASSICAL_TOL. Tiny negative values are clamped to 0.

    Raises:
        NumericalConsistencyError: If the two forms disagree
    """
    p_i = prior.probs
    conditional = np.array([linalg.entropy_bits(row) for row in table.p_j_given_i])
    reverse = linalg.entropy_bits(p_i @ table.p_j_given_i) - float(p_i @ conditional)

    standard = mutual_information_standard(table)
    residual = abs(reverse - standard)
    if residual > settings.CLASSICAL_TOL:
        raise NumericalConsistencyError("mutual information", residual)
    return max(reverse, 0.0)


def mutual_information_for_prior(
    states: Sequence[DensityMatrix],
    meas: GroupedMeasurement,
    prior
) -> float:
    """M(I:J) of fixed coding states under a given prior."""
    eps = Ensemble(probs=prior, states=list(states))
    return mutual_information(channel_service.outcome_table(eps, meas), eps.probs)


# ==================== Holevo quantities ====================

def holevo_chi(eps: Ensemble) -> float:
    """chi = S(rho) - sum_i P(i) S(rho_i), in bits."""
    p_i = eps.probs.probs
    member_entropies = np.array([linalg.entropy_bits(state.eigenvalues) for state in eps.states])
    rho = channel_service.ensemble_state(eps)
    return linalg.entropy_bits(rho.eigenvalues) - float(p_i @ member_entropies)


def chi_j(eps: Ensemble, meas: GroupedMeasurement, j: int) -> float:
    """
    Holevo quantity of the ensemble left after observing group j.

    Raises:
        ImpossibleOutcomeError: If P(j) <= ZERO_PROB_TOL
    """
    return holevo_chi(channel_service.posterior_ensemble(eps, meas, j))


def _posterior_chis(eps: Ensemble, meas: GroupedMeasurement):
    """
    chi_j for every group, without building the posterior ensembles.

    Returns:
        Tuple of (chi_j array with 0 for impossible j, P(j) array)
    """
    p_i = eps.probs.probs
    per_state = channel_service.state_group_branches(eps.stacked(), meas)  # [i, j]
    p_j_given_i = _drop_impossible(np.real(np.einsum("ijaa->ij", per_state)))
    receiver = np.einsum("i,ijab->jab", p_i, per_state)
    p_j = _drop_impossible(p_i @ p_j_given_i)

    s_receiver = linalg.spectral_entropies(receiver, p_j)
    s_post = linalg.spectral_entropies(per_state, p_j_given_i)

    joint = p_i[:, None] * p_j_given_i
    safe = np.where(p_j > 0.0, p_j, 1.0)
    posterior_average = np.sum(joint * s_post, axis=0) / safe
    chis = np.where(p_j > 0.0, s_receiver - posterior_average, 0.0)
    return chis, p_j


def sww_fine_bound(eps: Ensemble, meas: GroupedMeasurement) -> float:
    """chi - sum_kj P(k, j) chi_kj, every operator treated as an observed outcome."""
    chis, p_kj = _posterior_chis(eps, meas.refine())
    return holevo_chi(eps) - float(p_kj @ chis)


# ==================== Entropy reduction ====================

def avg_entropy_reduction(rho: DensityMatrix, meas: GroupedMeasurement) -> float:
    """
    <dS(rho)> = S(rho) - sum_j P(j) S(rho'_j), in bits.

    Outcomes with P(j) <= ZERO_PROB_TOL carry no weight. The value may be
    negative for inefficient measurements.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(matrix=rho)
    if rho.dim != meas.dim:
        raise DimensionMismatchError(f"state dimension {rho.dim} != measurement dimension {meas.dim}")
    grouped = channel_service.group_branches(rho.matrix, meas)
    p_j = _drop_impossible(np.real(np.einsum("jaa->j", grouped)))
    after = linalg.spectral_entropies(grouped, p_j)
    return linalg.entropy_bits(rho.eigenvalues) - float(p_j @ after)


def entropy_reductions(eps: Ensemble, meas: GroupedMeasurement) -> np.ndarray:
    """<dS(rho_i)> for every member of the ensemble."""
    per_state = channel_service.state_group_branches(eps.stacked(), meas)
    p_j_given_i = _drop_impossible(np.real(np.einsum("ijaa->ij", per_state)))
    after = linalg.spectral_entropies(per_state, p_j_given_i)
    before = np.array([linalg.entropy_bits(state.eigenvalues) for state in eps.states])
    return before - np.sum(p_j_given_i * after, axis=1)


# ==================== Report ====================

def bound_report(eps: Ensemble, meas: GroupedMeasurement) -> BoundReport:
    """
    Evaluate every quantity and gap for one (ensemble, measurement) pair.

    Args:
        eps: Encoding ensemble {P(i), rho_i}
        meas: Grouped measurement {A_kj}

    Returns:
        BoundReport: Quantities in bits; gaps are bound - M
    """
    channel_service.require_same_dim(eps, meas)
    table = channel_service.outcome_table(eps, meas)
    m = mutual_information(table, eps.probs)
    chi = holevo_chi(eps)
    chis, p_j = _posterior_chis(eps, meas)
    sum_pj_chi_j = float(p_j @ chis)

    fine_chis, p_kj = _posterior_chis(eps, meas.refine())
    sum_pkj_chi_kj = float(p_kj @ fine_chis)

    rho = channel_service.ensemble_state(eps)
    ds = avg_entropy_reduction(rho, meas)
    per_state = entropy_reductions(eps, meas)
    avg_member_ds = float(eps.probs.probs @ per_state)

    efficient = meas.efficient()
    return BoundReport(
        dim=eps.dim,
        n_states=eps.size,
        n_groups=meas.n_groups,
        efficient=efficient,
        complete=meas.complete(),
        mutual_info=m,
        chi=chi,
        chi_j=chis.tolist(),
        p_j=table.p_j.tolist(),
        sum_pj_chi_j=sum_pj_chi_j,
        sum_pkj_chi_kj=sum_pkj_chi_kj,
        avg_entropy_reduction=ds,
        per_state_entropy_reductions=per_state.tolist(),
        gap_holevo=chi - m,
        gap_sww_theorem1=chi - sum_pj_chi_j - m,
        gap_gen_hall=ds - avg_member_ds - m,
        gap_sww_fine=chi - sum_pkj_chi_kj - m,
        gap_hall=ds - m if efficient else None,
        ozawa_nonneg=bool(ds >= -settings.BOUND_TOL) if efficient else None,
    )

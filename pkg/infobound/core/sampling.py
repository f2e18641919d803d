"""
Random-object sampling for the verification suites.
Haar unitaries, Ginibre density matrices, random Kraus sets and grouped
measurements. Generators are always explicit parameters.
"""

from typing import List, Sequence

import numpy as np
from scipy import linalg as sla

from infobound.config import settings
from infobound.core.linalg import inverse_sqrt_psd
from infobound.utils.exceptions import ConfigurationError, SingularOperatorError
from infobound.utils.logger import log_debug


def instance_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """
    Counter-based generator for one instance of a suite.

    Instance `index` of stream `stream` is reproducible in isolation from
    the master seed, whatever else the suite draws.
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.Philox(sequence))


def complex_normal(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard circular complex Gaussian entries (E|z|^2 = 1)."""
    real = rng.normal(loc=0.0, scale=np.sqrt(0.5), size=shape)
    imag = rng.normal(loc=0.0, scale=np.sqrt(0.5), size=shape)
    return real + 1j * imag


def _require_positive(name: str, value: int) -> None:
    if value < 1:
        raise ConfigurationError(f"{name} must be >= 1, got {value}")


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-distributed d x d unitary.

    QR of a Ginibre matrix with the phases of R's diagonal moved into Q,
    which makes the distribution exactly Haar.
    """
    _require_positive("d", d)
    z = complex_normal((d, d), rng)
    q, r = sla.qr(z)
    diagonal = np.diag(r)
    phases = diagonal / np.abs(diagonal)
    return q * phases


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^d."""
    _require_positive("d", d)
    psi = complex_normal(d, rng)
    return psi / np.linalg.norm(psi)


def random_density(d: int, rng: np.random.Generator, rank: int = None) -> np.ndarray:
    """
    Random density matrix G G^dagger / Tr[G G^dagger] with Ginibre G.

    Args:
        d: Dimension
        rng: Generator
        rank: Number of columns of G (defaults to d, full rank)
    """
    _require_positive("d", d)
    g = complex_normal((d, rank or d), rng)
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))


def random_probabilities(n: int, rng: np.random.Generator, concentration: float = 1.0) -> np.ndarray:
    """Dirichlet-distributed probability vector of length n."""
    _require_positive("n", n)
    return rng.dirichlet(np.full(n, concentration))


def _whitened(raw: np.ndarray) -> np.ndarray:
    total = np.einsum("nba,nbc->ac", raw.conj(), raw)
    return raw @ inverse_sqrt_psd(total)


def random_kraus_set(d: int, m: int, rng: np.random.Generator) -> List[np.ndarray]:
    """
    Random complete Kraus set A_i = G_i S^{-1/2}, S = sum_i G_i^dagger G_i.

    Raises:
        SingularOperatorError: If every attempt produced a singular S
    """
    _require_positive("d", d)
    _require_positive("m", m)
    last_error = None
    for attempt in range(settings.KRAUS_MAX_ATTEMPTS):
        try:
            return list(_whitened(complex_normal((m, d, d), rng)))
        except SingularOperatorError as e:
            last_error = e
            log_debug("Singular Kraus normalization, redrawing", attempt=attempt, d=d, m=m)
    raise last_error


def random_rank_one_measurement(d: int, m: int, rng: np.random.Generator) -> List[np.ndarray]:
    """
    Complete efficient POVM with rank-one operators A_j = |u_j><v_j|.

    The |v_j> come from whitening m random vectors (m >= d), the |u_j>
    are independent Haar vectors, so every post-measurement state is pure.
    """
    if m < d:
        raise ConfigurationError(f"a complete rank-one measurement needs m >= d, got m={m}, d={d}")
    last_error = None
    for attempt in range(settings.KRAUS_MAX_ATTEMPTS):
        vectors = complex_normal((m, d), rng)
        frame = np.einsum("na,nb->ab", vectors, vectors.conj())
        try:
            whitening = inverse_sqrt_psd(frame)
        except SingularOperatorError as e:
            last_error = e
            log_debug("Singular rank-one frame, redrawing", attempt=attempt, d=d, m=m)
            continue
        covectors = vectors @ whitening.T
        return [np.outer(random_pure_state(d, rng), v.conj()) for v in covectors]
    raise last_error


def random_projective_measurement(d: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Rank-one projectors onto the columns of a Haar unitary."""
    u = haar_unitary(d, rng)
    return [np.outer(u[:, k], u[:, k].conj()) for k in range(d)]


def random_grouping(n_operators: int, n_groups: int, rng: np.random.Generator) -> List[List[int]]:
    """
    Random partition of operator indices into exactly n_groups non-empty groups.

    Indices keep their relative order inside each group.
    """
    _require_positive("n_groups", n_groups)
    if n_groups > n_operators:
        raise ConfigurationError(f"cannot split {n_operators} operators into {n_groups} groups")
    labels = np.concatenate([np.arange(n_groups), rng.integers(0, n_groups, n_operators - n_groups)])
    labels = rng.permutation(labels)
    return [[int(i) for i in np.flatnonzero(labels == g)] for g in range(n_groups)]


def random_commuting_ensemble(d: int, n_states: int, rng: np.random.Generator):
    """
    Coding states diagonal in one random basis, with that basis.

    Returns:
        Tuple of (state matrices, basis unitary)
    """
    u = haar_unitary(d, rng)
    states = []
    for _ in range(n_states):
        spectrum = random_probabilities(d, rng, concentration=0.5)
        states.append((u * spectrum) @ u.conj().T)
    return states, u


def random_permutations(d: int, count: int, rng: np.random.Generator) -> Sequence[np.ndarray]:
    """`count` independent uniformly random permutations of range(d)."""
    return [rng.permutation(d) for _ in range(count)]

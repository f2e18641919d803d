"""
Unit tests for the linear algebra kernel.
Eigensolvers, entropies, tensor products and partial traces.
"""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings as hyp_settings, strategies as st

from infobound.config import settings
from infobound.core import linalg, sampling
from infobound.core.entropy import partial_trace, shannon_entropy, von_neumann_entropy
from infobound.models.states import DensityMatrix
from infobound.utils.exceptions import (
    DimensionMismatchError,
    InvariantViolationError,
    NumericalConsistencyError,
    SingularOperatorError,
)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = sampling.complex_normal((d, d), rng)
    return 0.5 * (g + g.conj().T)


@pytest.mark.unit
class TestEigh:
    """Test the Hermitian eigendecomposition contract."""

    def test_identity(self):
        values, _ = linalg.eigh(np.eye(3))
        assert np.allclose(values, [1.0, 1.0, 1.0])

    def test_diagonal(self):
        values, _ = linalg.eigh(np.diag([0.3, 0.7]))
        assert np.allclose(values, [0.3, 0.7])

    def test_pauli_x(self):
        values, vectors = linalg.eigh([[0, 1], [1, 0]])
        assert np.allclose(values, [-1.0, 1.0])
        minus = np.array([1.0, -1.0]) / np.sqrt(2)
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        # equal up to a phase
        assert abs(abs(np.vdot(minus, vectors[:, 0])) - 1.0) < 1e-12
        assert abs(abs(np.vdot(plus, vectors[:, 1])) - 1.0) < 1e-12

    def test_non_hermitian_rejected(self):
        with pytest.raises(InvariantViolationError) as exc_info:
            linalg.eigh([[0, 1], [0, 0]])
        assert exc_info.value.invariant == "hermitian"
        assert exc_info.value.residual == pytest.approx(1.0)

    def test_non_square_rejected(self):
        with pytest.raises(InvariantViolationError):
            linalg.eigh(np.zeros((2, 3)))

    def test_non_finite_rejected(self):
        with pytest.raises(InvariantViolationError):
            linalg.eigh([[np.nan, 0], [0, 1]])

    @pytest.mark.property
    @hyp_settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 16))
    def test_reconstruction(self, seed, d):
        h = random_hermitian(d, np.random.default_rng(seed))
        values, vectors = linalg.eigh(h)
        assert np.max(np.abs(vectors @ np.diag(values) @ vectors.conj().T - h)) <= 1e-9
        assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(d))) <= 1e-9
        assert np.all(np.diff(values) >= 0)


@pytest.mark.unit
class TestJacobi:
    """Test the cyclic Jacobi eigensolver."""

    @pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
    def test_matches_lapack(self, rng, d):
        h = random_hermitian(d, rng)
        values, vectors = linalg.jacobi_eigh(h)
        assert np.allclose(values, np.linalg.eigvalsh(h), atol=1e-10)
        assert np.max(np.abs(vectors @ np.diag(values) @ vectors.conj().T - h)) <= 1e-9
        assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(d))) <= 1e-9

    def test_complex_phases(self):
        h = np.array([[1.0, 1j], [-1j, 1.0]])
        values, _ = linalg.jacobi_eigh(h)
        assert np.allclose(values, [0.0, 2.0], atol=1e-12)

    def test_selected_by_setting(self, monkeypatch, rng):
        h = random_hermitian(4, rng)
        monkeypatch.setattr(settings, "EIGENSOLVER", "jacobi")
        values, _ = linalg.eigh(h)
        batched = linalg.spectra(np.stack([h, h]))
        assert np.allclose(values, np.linalg.eigvalsh(h), atol=1e-10)
        assert batched.shape == (2, 4)
        assert np.allclose(batched[1], values, atol=1e-10)

    def test_sweep_limit(self, rng):
        with pytest.raises(NumericalConsistencyError):
            linalg.jacobi_eigh(random_hermitian(6, rng), tol=0.0, max_sweeps=1)

    @pytest.mark.property
    @hyp_settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 16))
    def test_eigh_contract(self, monkeypatch, seed, d):
        monkeypatch.setattr(settings, "EIGENSOLVER", "jacobi")
        h = random_hermitian(d, np.random.default_rng(seed))
        values, vectors = linalg.eigh(h)
        assert np.max(np.abs(vectors @ np.diag(values) @ vectors.conj().T - h)) <= 1e-9
        assert np.max(np.abs(vectors.conj().T @ vectors - np.eye(d))) <= 1e-9
        assert np.all(np.diff(values) >= 0)

    def test_converged_input_stops_early(self):
        # already diagonal: zero off-diagonal norm, no sweep needed
        values, vectors = linalg.jacobi_eigh(np.diag([3.0, 1.0, 2.0]), max_sweeps=0)
        assert values.tolist() == [1.0, 2.0, 3.0]
        assert np.allclose(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])

    def test_reconstruction_tolerance(self, monkeypatch, rng):
        monkeypatch.setattr(settings, "RECONSTRUCTION_TOL", -1.0)
        with pytest.raises(NumericalConsistencyError) as exc_info:
            linalg.jacobi_eigh(random_hermitian(3, rng))
        assert exc_info.value.quantity == "jacobi reconstruction"


@pytest.mark.unit
class TestEntropies:
    """Test von Neumann and Shannon entropies (bits)."""

    def test_pure_state(self, ket_plus):
        assert von_neumann_entropy(ket_plus) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy(DensityMatrix.maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)

    def test_known_spectrum(self):
        lam = (0.853553, 0.146447)
        expected = -sum(x * math.log2(x) for x in lam)
        value = von_neumann_entropy(DensityMatrix.diagonal(lam))
        assert value == pytest.approx(expected, abs=1e-9)
        assert value == pytest.approx(0.60090, abs=1e-4)

    def test_bounded_by_log_dim(self, rng):
        for d in (2, 3, 5):
            rho = DensityMatrix(matrix=sampling.random_density(d, rng))
            assert -1e-12 <= von_neumann_entropy(rho) <= math.log2(d) + 1e-12

    def test_unitary_invariance(self, rng):
        rho = DensityMatrix(matrix=sampling.random_density(4, rng))
        u = sampling.haar_unitary(4, rng)
        rotated = DensityMatrix(matrix=linalg.hermitize(u @ rho.matrix @ u.conj().T))
        assert von_neumann_entropy(rotated) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)

    @pytest.mark.parametrize("p, expected", [
        ((1.0, 0.0), 0.0),
        ((0.5, 0.5), 1.0),
        ((0.25, 0.25, 0.25, 0.25), 2.0),
    ])
    def test_shannon(self, p, expected):
        assert shannon_entropy(np.array(p)) == pytest.approx(expected, abs=1e-12)

    def test_shannon_rejects_negative(self):
        with pytest.raises(InvariantViolationError):
            shannon_entropy(np.array([1.5, -0.5]))

    def test_spectral_entropies_zero_weight(self):
        stack = np.stack([np.eye(2) * 0.25, np.zeros((2, 2))])
        values = linalg.spectral_entropies(stack, np.array([0.5, 0.0]))
        assert values == pytest.approx([1.0, 0.0])

    def test_spectral_entropies_reject_negative_spectrum(self):
        stack = np.stack([np.eye(2) * 0.5, np.diag([1.0 + 1e-6, -1e-6])])
        with pytest.raises(InvariantViolationError) as exc_info:
            linalg.spectral_entropies(stack)
        assert exc_info.value.invariant == "positive semidefinite"

    def test_clamp_spectrum(self):
        assert linalg.clamp_spectrum([-1e-12, 1.0]).tolist() == [0.0, 1.0]
        with pytest.raises(InvariantViolationError):
            linalg.clamp_spectrum([-1e-6, 1.0])


@pytest.mark.unit
class TestTensorStructure:
    """Test tensor products, partial traces and dephasing."""

    def test_identity_tensor(self):
        assert np.allclose(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_bookkeeping(self):
        product = linalg.tensor(np.diag([1, 0]), np.diag([0, 1]))
        assert np.allclose(product, np.diag([0, 1, 0, 0]))

    def test_trace_multiplies(self, rng):
        a = sampling.random_density(2, rng)
        b = sampling.random_density(3, rng)
        assert np.trace(linalg.tensor(a, b)) == pytest.approx(1.0)

    def test_associative(self, rng):
        a, b, c = (sampling.complex_normal((2, 2), rng) for _ in range(3))
        left = linalg.tensor(linalg.tensor(a, b), c)
        right = linalg.tensor(a, linalg.tensor(b, c))
        assert np.max(np.abs(left - right)) <= 1e-12

    def test_partial_trace_product(self, rng):
        rho_a = sampling.random_density(2, rng)
        rho_b = sampling.random_density(3, rng)
        joint = DensityMatrix(matrix=linalg.tensor(rho_a, rho_b))
        assert np.max(np.abs(partial_trace(joint, 2, 3, "A").matrix - rho_a)) <= 1e-10
        assert np.max(np.abs(partial_trace(joint, 2, 3, "B").matrix - rho_b)) <= 1e-10

    def test_partial_trace_bell_state(self):
        bell = DensityMatrix.pure([1.0, 0.0, 0.0, 1.0])
        assert np.allclose(partial_trace(bell, 2, 2, "A").matrix, np.eye(2) / 2)

    def test_partial_trace_random_is_valid(self, rng):
        joint = DensityMatrix(matrix=sampling.random_density(6, rng))
        reduced = partial_trace(joint, 2, 3, "A")
        assert reduced.dim == 2
        assert np.trace(reduced.matrix) == pytest.approx(1.0)

    def test_entropy_two_ways(self, rng):
        rho_a = DensityMatrix(matrix=sampling.random_density(3, rng))
        rho_b = sampling.random_density(2, rng)
        joint = DensityMatrix(matrix=linalg.tensor(rho_a.matrix, rho_b))
        via_trace = von_neumann_entropy(partial_trace(joint, 3, 2, "A"))
        assert via_trace == pytest.approx(von_neumann_entropy(rho_a), abs=1e-9)

    def test_partial_trace_dimension_mismatch(self, rng):
        joint = DensityMatrix(matrix=sampling.random_density(6, rng))
        with pytest.raises(DimensionMismatchError):
            partial_trace(joint, 2, 2, "A")

    def test_reduce_state_three_parties(self, rng):
        parts = [sampling.random_density(d, rng) for d in (2, 3, 2)]
        joint = linalg.tensor(linalg.tensor(parts[0], parts[1]), parts[2])
        kept = linalg.reduce_state(joint, (2, 3, 2), (2, 0))
        assert np.allclose(kept, linalg.tensor(parts[2], parts[0]))

    def test_dephase_removes_coherence(self, ket_plus):
        dephased = linalg.dephase(ket_plus.matrix, (2,), 0)
        assert np.allclose(dephased, np.eye(2) / 2)

    def test_dephase_one_subsystem(self, ket_plus):
        joint = linalg.tensor(ket_plus.matrix, ket_plus.matrix)
        dephased = linalg.dephase(joint, (2, 2), 0)
        assert np.allclose(dephased, linalg.tensor(np.eye(2) / 2, ket_plus.matrix))


@pytest.mark.unit
class TestMatrixFunctions:
    """Test S^{-1/2} and completeness residuals."""

    def test_inverse_sqrt(self, rng):
        g = sampling.complex_normal((3, 3), rng)
        s = g.conj().T @ g
        w = linalg.inverse_sqrt_psd(s)
        assert np.allclose(w @ s @ w, np.eye(3), atol=1e-10)

    def test_singular(self):
        with pytest.raises(SingularOperatorError) as exc_info:
            linalg.inverse_sqrt_psd(np.diag([1.0, 0.0]))
        assert exc_info.value.min_eigenvalue == pytest.approx(0.0)

    def test_completeness_residual(self):
        ops = np.stack([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        assert linalg.completeness_residual(ops) == 0.0
        assert linalg.completeness_residual(ops[:1]) == pytest.approx(1.0)

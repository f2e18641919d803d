"""
Unit tests for the validated value types.
"""

import numpy as np
import pytest

from infobound.models.measurement import GroupedMeasurement
from infobound.models.states import DensityMatrix, Ensemble, JointEnsemble, ProbVector
from infobound.utils.exceptions import DimensionMismatchError, InvariantViolationError


@pytest.mark.unit
class TestProbVector:
    """Test probability vector validation."""

    def test_valid(self):
        p = ProbVector.of([0.25, 0.75])
        assert len(p) == 2
        assert not p.probs.flags.writeable

    def test_tiny_negative_clamped(self):
        p = ProbVector.of([1.0 + 1e-13, -1e-13])
        assert p.probs[1] == 0.0

    @pytest.mark.parametrize("values, invariant", [
        ([], "non-empty"),
        ([0.5, 0.6], "unit total probability"),
        ([1.5, -0.5], "non-negative probabilities"),
        ([np.nan, 1.0], "finite entries"),
    ])
    def test_invalid(self, values, invariant):
        with pytest.raises(InvariantViolationError) as exc_info:
            ProbVector.of(values)
        assert exc_info.value.invariant == invariant

    def test_uniform(self):
        assert np.allclose(ProbVector.uniform(4).probs, 0.25)


@pytest.mark.unit
class TestDensityMatrix:
    """Test density matrix validation."""

    def test_pure_state(self, ket_plus):
        assert ket_plus.rank() == 1
        assert np.allclose(ket_plus.eigenvalues, [0.0, 1.0])

    def test_trace_violation(self):
        with pytest.raises(InvariantViolationError) as exc_info:
            DensityMatrix(matrix=np.eye(2))
        assert exc_info.value.invariant == "unit trace"
        assert exc_info.value.residual == pytest.approx(1.0)

    def test_not_positive(self):
        with pytest.raises(InvariantViolationError) as exc_info:
            DensityMatrix(matrix=np.diag([1.5, -0.5]))
        assert exc_info.value.invariant == "positive semidefinite"

    def test_not_hermitian(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix(matrix=[[0.5, 0.5], [0.0, 0.5]])

    def test_small_negative_eigenvalue_clamped(self):
        rho = DensityMatrix(matrix=np.diag([1.0 + 5e-11, -5e-11]))
        assert rho.eigenvalues.min() == 0.0

    def test_from_unnormalized(self):
        rho = DensityMatrix.from_unnormalized(np.diag([2.0, 2.0]))
        assert np.allclose(rho.matrix, np.eye(2) / 2)

    def test_frozen(self, ket0):
        with pytest.raises(ValueError):
            ket0.matrix[0, 0] = 0.0


@pytest.mark.unit
class TestEnsemble:
    """Test ensembles and joint ensembles."""

    def test_from_entries(self, ket0, ket1):
        eps = Ensemble.from_entries([(0.3, ket0), (0.7, ket1)])
        assert eps.size == 2
        assert eps.dim == 2
        assert eps.stacked().shape == (2, 2, 2)

    def test_length_mismatch(self, ket0, ket1):
        with pytest.raises(DimensionMismatchError):
            Ensemble(probs=[1.0], states=[ket0, ket1])

    def test_mixed_dimensions(self, ket0):
        with pytest.raises(DimensionMismatchError):
            Ensemble(probs=[0.5, 0.5], states=[ket0, DensityMatrix.maximally_mixed(3)])

    def test_joint_dims(self):
        state = DensityMatrix.maximally_mixed(6)
        je = JointEnsemble(probs=[1.0], states=[state], dims=(2, 3))
        assert je.dims == (2, 3)
        with pytest.raises(DimensionMismatchError):
            JointEnsemble(probs=[1.0], states=[state], dims=(2, 2))


@pytest.mark.unit
class TestGroupedMeasurement:
    """Test grouped measurement validation and derived flags."""

    def test_efficient_and_complete(self, z_measurement):
        assert z_measurement.efficient()
        assert z_measurement.complete()
        assert z_measurement.n_groups == 2
        assert z_measurement.n_operators == 2

    def test_grouped_is_inefficient(self, x_merged):
        assert not x_merged.efficient()
        assert x_merged.complete()
        assert x_merged.group_sizes == [2]

    def test_incomplete_rejected(self):
        with pytest.raises(InvariantViolationError) as exc_info:
            GroupedMeasurement.from_operators([np.diag([1.0, 0.0])])
        assert exc_info.value.invariant == "completeness"

    def test_empty_group_rejected(self):
        with pytest.raises(InvariantViolationError):
            GroupedMeasurement(groups=[[np.eye(2)], []])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError):
            GroupedMeasurement(groups=[[np.eye(2)], [np.eye(3)]])

    def test_identity_not_complete(self):
        meas = GroupedMeasurement.from_operators([np.eye(2)])
        assert meas.efficient()
        assert not meas.complete()

    def test_refine_and_merge(self, x_merged, x_measurement):
        refined = x_merged.refine()
        assert refined.efficient()
        assert np.allclose(refined.operators, x_measurement.operators)
        merged = x_measurement.merge()
        assert merged.n_groups == 1
        assert merged.n_operators == 2

    def test_grouped_indices(self, rng):
        ops = [np.eye(2) / np.sqrt(3)] * 3
        meas = GroupedMeasurement.grouped(ops, [[0, 2], [1]])
        assert meas.group_index.tolist() == [0, 0, 1]
        assert meas.position_index.tolist() == [0, 1, 0]
        assert np.allclose(meas.effects().sum(axis=0), np.eye(2))

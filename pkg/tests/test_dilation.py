"""
Tests for the Stinespring dilation and the dilation certificate.
"""

import numpy as np
import pytest

from infobound.core import linalg, sampling
from infobound.models.measurement import GroupedMeasurement
from infobound.models.states import DensityMatrix, Ensemble, JointEnsemble
from infobound.services import channel_service, dilation_service, information_service
from infobound.utils.exceptions import DimensionMismatchError


@pytest.mark.unit
class TestDilate:
    """Test V = sum |kj> (x) A_kj."""

    def test_shape(self, z_measurement):
        v = dilation_service.dilate(z_measurement)
        assert v.shape == (4, 2)

    def test_isometry(self, rng, random_instance):
        _, meas = random_instance(rng, d=3, m=5, n_groups=2)
        v = dilation_service.dilate(meas)
        assert dilation_service.isometry_residual(v) <= 1e-10

    def test_probabilities_match_outcome_table(self, rng, random_instance):
        eps, meas = random_instance(rng, d=3, n_states=2, m=4, n_groups=2)
        rho = eps.states[0]
        table = channel_service.outcome_table(eps, meas)
        expected = table.p_kj_given_i[0, meas.group_index, meas.position_index]
        assert np.allclose(dilation_service.dilated_probabilities(rho, meas), expected, atol=1e-12)

    def test_zero_plus_probabilities(self, zero_plus, z_measurement):
        rho = channel_service.ensemble_state(zero_plus)
        assert np.allclose(dilation_service.dilated_probabilities(rho, z_measurement), [0.75, 0.25])


@pytest.mark.unit
class TestHolevoMonotonicity:
    """Test chi under partial traces and unitaries."""

    def product_ensemble(self, ket0, ket1):
        tau = np.eye(2) / 2
        return JointEnsemble(
            probs=[0.5, 0.5],
            states=[linalg.tensor(ket0.matrix, tau), linalg.tensor(ket1.matrix, tau)],
            dims=(2, 2),
        )

    def test_trace_out_noise(self, ket0, ket1):
        before, after = dilation_service.chi_partial_trace_check(self.product_ensemble(ket0, ket1), 1)
        assert before == pytest.approx(1.0)
        assert after == pytest.approx(1.0)

    def test_trace_out_message(self, ket0, ket1):
        before, after = dilation_service.chi_partial_trace_check(self.product_ensemble(ket0, ket1), 0)
        assert before == pytest.approx(1.0)
        assert after == pytest.approx(0.0, abs=1e-12)

    def test_random_joint_ensemble(self, rng):
        je = JointEnsemble(
            probs=sampling.random_probabilities(3, rng),
            states=[sampling.random_density(6, rng) for _ in range(3)],
            dims=(2, 3),
        )
        for subsystem in (0, 1):
            before, after = dilation_service.chi_partial_trace_check(je, subsystem)
            assert after <= before + 1e-9

    def test_invalid_subsystem(self, ket0, ket1):
        with pytest.raises(DimensionMismatchError):
            dilation_service.chi_partial_trace_check(self.product_ensemble(ket0, ket1), 2)

    def test_unitary_invariance(self, rng, random_instance):
        eps, _ = random_instance(rng, d=4, n_states=3)
        u = sampling.haar_unitary(4, rng)
        assert dilation_service.chi_unitary_invariance(eps, u) <= 1e-10


@pytest.mark.unit
class TestDilationCertificate:
    """Test the step-by-step dilation certificate."""

    def test_orthogonal_bit(self, orthogonal_bit, z_measurement):
        cert = dilation_service.theorem1_trace(orthogonal_bit, z_measurement)
        assert cert.chi_Q == pytest.approx(1.0)
        assert cert.chi_QA_dilated == pytest.approx(1.0)
        assert cert.chi_QM_doubleprime == pytest.approx(1.0)
        assert cert.passed

    def test_inefficient(self, zero_plus, x_merged):
        cert = dilation_service.theorem1_trace(zero_plus, x_merged)
        assert cert.mutual_info == pytest.approx(0.0, abs=1e-12)
        assert cert.identity_residual <= 1e-8
        assert cert.passed

    def test_unitary_keeps_everything(self, rng, zero_plus):
        meas = channel_service.unitary_measurement(sampling.haar_unitary(2, rng))
        cert = dilation_service.theorem1_trace(zero_plus, meas)
        assert cert.chi_QM_doubleprime == pytest.approx(cert.chi_Q, abs=1e-9)
        assert cert.passed

    @pytest.mark.parametrize("d, n_states, m, n_groups", [
        (2, 2, 2, 1),
        (2, 3, 4, 2),
        (3, 2, 3, 3),
        (3, 4, 5, 2),
    ])
    def test_random_instances(self, make_rng, random_instance, d, n_states, m, n_groups):
        eps, meas = random_instance(make_rng(d * 100 + m), d=d, n_states=n_states, m=m, n_groups=n_groups)
        cert = dilation_service.theorem1_trace(eps, meas)
        report = information_service.bound_report(eps, meas)
        assert cert.identity_holds
        assert cert.chain_holds
        assert cert.bound_holds
        assert cert.chi_QM_doubleprime == pytest.approx(report.mutual_info + report.sum_pj_chi_j, abs=1e-8)

    def test_dimension_mismatch(self, orthogonal_bit):
        meas = channel_service.identity_measurement(3)
        with pytest.raises(DimensionMismatchError):
            dilation_service.theorem1_trace(orthogonal_bit, meas)

    def test_pure_states_complete_measurement(self, rng):
        ops = sampling.random_rank_one_measurement(2, 3, rng)
        meas = GroupedMeasurement.from_operators(ops)
        eps = Ensemble(
            probs=[0.5, 0.5],
            states=[DensityMatrix.pure(sampling.random_pure_state(2, rng)) for _ in range(2)],
        )
        cert = dilation_service.theorem1_trace(eps, meas)
        assert cert.passed
        assert meas.complete()

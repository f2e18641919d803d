"""
Tests for instance files: parsing, schema errors, fixtures and generators.
"""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from infobound.models.instance import InstanceFile
from infobound.models.request import GenerateKind, GenerateParams
from infobound.services import information_service
from infobound.services.instance_service import instance_service
from infobound.utils.exceptions import (
    ConfigurationError,
    InstanceFormatError,
    InvariantViolationError,
    OutputError,
)


def qubit_instance(**overrides) -> dict:
    data = {
        "dim": 2,
        "ensemble": [{"p": 1.0, "state": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}],
        "measurement": {"groups": [[[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]]},
    }
    data.update(overrides)
    return data


@pytest.mark.unit
class TestParse:
    """Test parsing and schema errors."""

    def test_valid(self):
        instance = instance_service.parse(json.dumps(qubit_instance()))
        eps, meas = instance.to_domain()
        assert eps.dim == 2
        assert meas.n_groups == 1

    def test_malformed_json_location(self, malformed_instance):
        with pytest.raises(InstanceFormatError) as exc_info:
            instance_service.load(malformed_instance)
        assert exc_info.value.location.endswith(":3:15")

    def test_missing_field(self):
        data = qubit_instance()
        del data["measurement"]
        with pytest.raises(InstanceFormatError) as exc_info:
            instance_service.parse(json.dumps(data), source="x.json")
        assert exc_info.value.location == "x.json: measurement"

    def test_probability_out_of_range(self):
        data = qubit_instance()
        data["ensemble"][0]["p"] = 1.5
        with pytest.raises(InstanceFormatError) as exc_info:
            instance_service.parse(json.dumps(data))
        assert exc_info.value.location.endswith("ensemble[0].p")

    def test_wrong_shape(self):
        data = qubit_instance(dim=3)
        with pytest.raises(InstanceFormatError) as exc_info:
            instance_service.parse(json.dumps(data))
        assert "ensemble[0].state has shape (2, 2)" in exc_info.value.detail

    def test_physical_invariants_checked_on_conversion(self):
        data = qubit_instance()
        data["ensemble"][0]["state"] = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
        instance = instance_service.parse(json.dumps(data))
        with pytest.raises(InvariantViolationError) as exc_info:
            instance.to_domain()
        assert exc_info.value.invariant == "unit trace"

    def test_missing_file(self, tmp_path):
        with pytest.raises(OutputError):
            instance_service.load(tmp_path / "nope.json")

    def test_model_rejects_empty_ensemble(self):
        with pytest.raises(ValidationError):
            InstanceFile.model_validate(qubit_instance(ensemble=[]))


@pytest.mark.unit
class TestFixtures:
    """Test the bundled fixtures against their documented values."""

    def test_noiseless_bit(self):
        eps, meas = instance_service.load_domain(instance_service.fixture_path("noiseless_bit"))
        report = information_service.bound_report(eps, meas)
        assert report.mutual_info == pytest.approx(1.0)
        assert report.chi == pytest.approx(1.0)

    def test_incomplete_readout(self):
        eps, meas = instance_service.load_domain(instance_service.fixture_path("sww_demo.json"))
        report = information_service.bound_report(eps, meas)
        assert report.mutual_info == pytest.approx(1.0)
        assert report.chi == pytest.approx(2.0)
        assert report.chi_j == pytest.approx([1.0, 1.0])
        assert report.gap_sww_theorem1 == pytest.approx(0.0, abs=1e-10)
        assert report.gap_holevo == pytest.approx(1.0)
        assert not report.complete

    def test_negative_entropy_reduction(self):
        eps, meas = instance_service.load_domain(instance_service.fixture_path("negative_entropy_reduction"))
        report = information_service.bound_report(eps, meas)
        assert report.avg_entropy_reduction == pytest.approx(-1.0)
        assert report.mutual_info == pytest.approx(0.0, abs=1e-12)
        assert report.gap_gen_hall == pytest.approx(0.0, abs=1e-10)
        assert not report.efficient


@pytest.mark.unit
class TestGenerate:
    """Test the instance generators."""

    def test_random(self):
        params = GenerateParams(kind=GenerateKind.RANDOM, dim=3, n_states=4, n_kraus=5, n_groups=2, seed=5)
        eps, meas = instance_service.generate(params).to_domain()
        assert eps.size == 4
        assert meas.dim == 3
        assert meas.n_operators == 5
        assert meas.n_groups == 2

    def test_random_is_reproducible(self):
        params = GenerateParams(kind=GenerateKind.RANDOM, dim=2, n_kraus=3, n_groups=2, seed=9)
        first = instance_service.dumps(instance_service.generate(params))
        second = instance_service.dumps(instance_service.generate(params))
        assert first == second

    def test_classical_bsc(self):
        params = GenerateParams(kind=GenerateKind.CLASSICAL, kernel="bsc:0.11")
        eps, meas = instance_service.generate(params).to_domain()
        report = information_service.bound_report(eps, meas)
        h = -0.11 * math.log2(0.11) - 0.89 * math.log2(0.89)
        assert report.mutual_info == pytest.approx(1 - h, abs=1e-12)

    def test_classical_prior_mismatch(self):
        params = GenerateParams(kind=GenerateKind.CLASSICAL, kernel="bsc:0.1", prior=[0.2, 0.3, 0.5])
        with pytest.raises(ConfigurationError):
            instance_service.generate(params)

    def test_symmetric_classical(self):
        params = GenerateParams(kind=GenerateKind.SYMMETRIC_CLASSICAL, kernel="0.9,0.1")
        eps, meas = instance_service.generate(params).to_domain()
        assert eps.size == 2
        assert meas.n_groups == 2

    def test_uc_approx(self):
        params = GenerateParams(kind=GenerateKind.UC_APPROX, dim=2, samples=8, n_states=3)
        eps, meas = instance_service.generate(params).to_domain()
        assert meas.n_groups == 8
        assert meas.complete()
        assert eps.size == 3

    def test_invalid_group_count(self):
        with pytest.raises(ValidationError):
            GenerateParams(kind=GenerateKind.RANDOM, n_kraus=2, n_groups=3)

    def test_save_and_load(self, tmp_path):
        params = GenerateParams(kind=GenerateKind.RANDOM, dim=2, n_kraus=3, n_groups=2, seed=1)
        instance = instance_service.generate(params)
        path = tmp_path / "instance.json"
        instance_service.save(instance, str(path))
        eps, meas = instance_service.load_domain(path)
        original_eps, original_meas = instance.to_domain()
        assert np.allclose(eps.stacked(), original_eps.stacked())
        assert np.allclose(meas.operators, original_meas.operators)


    @pytest.mark.parametrize("kind", [GenerateKind.RANDOM, GenerateKind.UC_APPROX])
    def test_report_survives_serialization(self, kind):
        instance = instance_service.generate(GenerateParams(kind=kind, dim=2, n_kraus=3, n_groups=2, samples=8, seed=5))
        before = information_service.bound_report(*instance.to_domain()).model_dump()
        text = instance_service.dumps(instance)
        after = information_service.bound_report(*instance_service.parse(text).to_domain()).model_dump()

        assert after.keys() == before.keys()
        for key, value in before.items():
            if isinstance(value, float):
                assert after[key] == pytest.approx(value, abs=1e-12), key
            elif isinstance(value, list):
                assert np.allclose(after[key], value, rtol=0.0, atol=1e-12), key
            else:
                assert after[key] == value, key

    def test_save_to_missing_directory(self, tmp_path):
        instance = instance_service.generate(GenerateParams(kind=GenerateKind.CLASSICAL))
        with pytest.raises(OutputError):
            instance_service.save(instance, str(tmp_path / "missing" / "x.json"))

"""
Pytest configuration and shared fixtures.
"""

from pathlib import Path
from typing import Callable, Tuple

import numpy as np
import pytest

from infobound.config import settings
from infobound.core import sampling
from infobound.models.measurement import GroupedMeasurement
from infobound.models.states import DensityMatrix, Ensemble


FIXTURES_DIR = Path(__file__).resolve().parent.parent / "infobound" / "fixtures"


# ==================== Configuration Fixtures ====================

@pytest.fixture(autouse=True)
def mock_settings(monkeypatch):
    """Pin the numeric settings every test relies on."""
    monkeypatch.setattr(settings, "EIGENSOLVER", "lapack")
    monkeypatch.setattr(settings, "BOUND_TOL", 1e-9)
    monkeypatch.setattr(settings, "IDENTITY_TOL", 1e-8)
    monkeypatch.setattr(settings, "CLASSICAL_TOL", 1e-10)
    monkeypatch.setattr(settings, "WORKERS", 1)
    return settings


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator, fresh for every test."""
    return sampling.instance_rng(20240601, 0, stream=99)


@pytest.fixture
def make_rng() -> Callable[[int], np.random.Generator]:
    """Factory for independent seeded generators."""
    return lambda index: sampling.instance_rng(20240601, index, stream=98)


# ==================== State Fixtures ====================

@pytest.fixture
def ket0() -> DensityMatrix:
    return DensityMatrix.basis(2, 0)


@pytest.fixture
def ket1() -> DensityMatrix:
    return DensityMatrix.basis(2, 1)


@pytest.fixture
def ket_plus() -> DensityMatrix:
    return DensityMatrix.pure([1.0, 1.0])


@pytest.fixture
def ket_minus() -> DensityMatrix:
    return DensityMatrix.pure([1.0, -1.0])


@pytest.fixture
def orthogonal_bit(ket0, ket1) -> Ensemble:
    """{(1/2, |0><0|), (1/2, |1><1|)}."""
    return Ensemble(probs=[0.5, 0.5], states=[ket0, ket1])


@pytest.fixture
def zero_plus(ket0, ket_plus) -> Ensemble:
    """{(1/2, |0><0|), (1/2, |+><+|)}."""
    return Ensemble(probs=[0.5, 0.5], states=[ket0, ket_plus])


# ==================== Measurement Fixtures ====================

@pytest.fixture
def z_measurement() -> GroupedMeasurement:
    return GroupedMeasurement.from_operators([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


@pytest.fixture
def x_projectors():
    plus = np.array([[0.5, 0.5], [0.5, 0.5]])
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
    return [plus, minus]


@pytest.fixture
def x_measurement(x_projectors) -> GroupedMeasurement:
    return GroupedMeasurement.from_operators(x_projectors)


@pytest.fixture
def x_merged(x_projectors) -> GroupedMeasurement:
    """X-basis projectors in a single observed group."""
    return GroupedMeasurement(groups=[x_projectors])


@pytest.fixture
def random_instance() -> Callable[..., Tuple[Ensemble, GroupedMeasurement]]:
    """Factory for random (ensemble, grouped measurement) pairs."""

    def build(rng: np.random.Generator, d: int = 3, n_states: int = 3, m: int = 4, n_groups: int = 2):
        eps = Ensemble(
            probs=sampling.random_probabilities(n_states, rng),
            states=[sampling.random_density(d, rng) for _ in range(n_states)],
        )
        operators = sampling.random_kraus_set(d, m, rng)
        meas = GroupedMeasurement.grouped(operators, sampling.random_grouping(m, n_groups, rng))
        return eps, meas

    return build


# ==================== Fixture Files ====================

@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def malformed_instance(tmp_path) -> Path:
    path = tmp_path / "broken.json"
    path.write_text('{"dim": 2,\n  "ensemble": [\n    {"p": 1.0 "state": []}\n  ]\n}\n')
    return path

"""
Instance service for loading, saving and generating instance files.
"""

import json
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from pydantic import ValidationError

from infobound.core import sampling
from infobound.models.instance import InstanceFile
from infobound.models.measurement import GroupedMeasurement
from infobound.models.request import GenerateKind, GenerateParams
from infobound.models.states import DensityMatrix, Ensemble, ProbVector
from infobound.services import channel_service, majorization_service
from infobound.utils.exceptions import ConfigurationError, InstanceFormatError, OutputError
from infobound.utils.logger import log_info


FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def _location(error: dict) -> str:
    parts = []
    for item in error.get("loc", ()):
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(f".{item}" if parts else str(item))
    return "".join(parts) or "<root>"


class InstanceService:
    """Service for instance files."""

    @staticmethod
    def parse(text: str, source: str = "<string>") -> InstanceFile:
        """
        Parse and schema-check instance JSON.

        Raises:
            InstanceFormatError: With line/column for malformed JSON or the
                field path for schema violations
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceFormatError(f"{source}:{e.lineno}:{e.colno}", e.msg)
        try:
            return InstanceFile.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            raise InstanceFormatError(f"{source}: {_location(first)}", first["msg"])

    def load(self, path) -> InstanceFile:
        """
        Read an instance file.

        Raises:
            OutputError: If the file cannot be read
            InstanceFormatError: If the content does not match the schema
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise OutputError(f"cannot read {path}: {e.strerror or e}")
        return self.parse(text, source=str(path))

    def load_domain(self, path) -> Tuple[Ensemble, GroupedMeasurement]:
        """Read an instance file and apply every physical invariant."""
        return self.load(path).to_domain()

    @staticmethod
    def dumps(instance: InstanceFile) -> str:
        return json.dumps(instance.model_dump(exclude_none=True), indent=2)

    def save(self, instance: InstanceFile, path: Optional[str]) -> str:
        """
        Write an instance as JSON (to `path`, or just return the text when None).

        Raises:
            OutputError: If the file cannot be written
        """
        text = self.dumps(instance)
        if path:
            try:
                Path(path).write_text(text + "\n", encoding="utf-8")
            except OSError as e:
                raise OutputError(f"cannot write {path}: {e.strerror or e}")
            log_info("Instance written", path=str(path))
        return text

    @staticmethod
    def fixture_path(name: str) -> Path:
        """Path of a bundled fixture, with or without the .json suffix."""
        filename = name if name.endswith(".json") else f"{name}.json"
        return FIXTURES_DIR / filename

    # ==================== Generators ====================

    def generate(self, params: GenerateParams) -> InstanceFile:
        """Build an instance of the requested kind."""
        rng = sampling.instance_rng(params.seed, 0)
        if params.kind == GenerateKind.RANDOM:
            eps, meas = self._random(params, rng)
            description = f"random d={params.dim} states={params.n_states} kraus={params.n_kraus} groups={params.n_groups}"
        elif params.kind == GenerateKind.CLASSICAL:
            eps, meas = self._classical(params)
            description = f"classical kernel={params.kernel or 'identity'}"
        elif params.kind == GenerateKind.SYMMETRIC_CLASSICAL:
            eps, meas = self._symmetric_classical(params, rng)
            description = f"symmetric classical d={params.dim}"
        else:
            eps, meas = self._uc_approx(params, rng)
            description = f"covariant approximation d={params.dim} samples={params.samples} seed_op={params.seed_op}"
        log_info("Instance generated", kind=params.kind.value, seed=params.seed)
        return InstanceFile.from_domain(eps, meas, description=description)

    @staticmethod
    def _random_ensemble(dim: int, n_states: int, rng: np.random.Generator) -> Ensemble:
        return Ensemble(
            probs=sampling.random_probabilities(n_states, rng),
            states=[sampling.random_density(dim, rng) for _ in range(n_states)],
        )

    def _random(self, params: GenerateParams, rng: np.random.Generator):
        eps = self._random_ensemble(params.dim, params.n_states, rng)
        operators = sampling.random_kraus_set(params.dim, params.n_kraus, rng)
        partition = sampling.random_grouping(params.n_kraus, params.n_groups, rng)
        return eps, GroupedMeasurement.grouped(operators, partition)

    @staticmethod
    def _prior(params: GenerateParams, size: int) -> ProbVector:
        if params.prior is None:
            return ProbVector.uniform(size)
        if len(params.prior) != size:
            raise ConfigurationError(f"prior of length {len(params.prior)} for {size} channel inputs")
        return ProbVector.of(params.prior)

    def _classical(self, params: GenerateParams):
        size = len(params.prior) if params.prior is not None else params.dim
        kernel = channel_service.parse_kernel(params.kernel or "identity", size)
        return channel_service.classical_channel(self._prior(params, kernel.shape[0]), kernel)

    def _symmetric_classical(self, params: GenerateParams, rng: np.random.Generator):
        if params.kernel:
            kernel = np.array([float(x) for x in params.kernel.split(",")])
        else:
            kernel = sampling.random_probabilities(params.dim, rng)
        dim = kernel.size
        meas = majorization_service.symmetric_classical_measurement(kernel, dim)
        eps = Ensemble(
            probs=self._prior(params, dim),
            states=[DensityMatrix.basis(dim, i) for i in range(dim)],
        )
        return eps, meas

    def _uc_approx(self, params: GenerateParams, rng: np.random.Generator):
        if params.seed_op == "projector":
            seed_op = np.zeros((params.dim, params.dim))
            seed_op[0, 0] = 1.0
        else:
            seed_op = sampling.complex_normal((params.dim, params.dim), rng)
        meas = majorization_service.uc_measurement_approx(seed_op, params.samples, rng)
        return self._random_ensemble(params.dim, params.n_states, rng), meas


instance_service = InstanceService()

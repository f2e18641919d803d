"""
Suite service.
Seeded verification suites over random instances, aggregated into per-check
outcomes, and their CSV / JSON / text renderings.
"""

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from infobound.config import settings
from infobound.core import sampling
from infobound.models.measurement import GroupedMeasurement
from infobound.models.report import CSV_COLUMNS, CheckOutcome, SchurQuantity, SuiteResult
from infobound.models.request import OutputFormat, SuiteConfig, SuiteKind
from infobound.models.states import Ensemble, JointEnsemble, ProbVector
from infobound.services import (
    channel_service,
    dilation_service,
    information_service,
    majorization_service,
)
from infobound.utils.exceptions import OutputError
from infobound.utils.logger import log_info, log_warning


# Independent random streams per suite, so suites stay reproducible on their own.
STREAMS = {
    SuiteKind.BOUNDS: 1,
    SuiteKind.CONCAVITY: 2,
    SuiteKind.CLASSICAL_EQUALITY: 3,
    SuiteKind.SCHUR_CLASSICAL: 4,
    SuiteKind.SCHUR_UC: 5,
    SuiteKind.DILATION: 6,
}
CALIBRATION_STREAM = 7
UC_DIMS = (2, 3)

BOUND_FLAVORS = ("grouped", "merged", "singleton", "rank-one", "commuting")


class InstanceOutcome(BaseModel):
    """Rows and named gaps produced by one suite instance."""
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    gaps: Dict[str, List[float]] = Field(default_factory=dict)

    def add(self, name: str, gap: float) -> None:
        self.gaps.setdefault(name, []).append(float(gap))


# ==================== Random instance helpers ====================

def _draw(rng: np.random.Generator, bounds: Tuple[int, int], ceiling: Optional[int] = None) -> int:
    lo, hi = bounds
    if ceiling is not None:
        lo, hi = min(lo, ceiling), min(hi, ceiling)
    return int(rng.integers(lo, hi + 1))


def _random_ensemble(d: int, n_states: int, rng: np.random.Generator) -> Ensemble:
    return Ensemble(
        probs=sampling.random_probabilities(n_states, rng),
        states=[sampling.random_density(d, rng) for _ in range(n_states)],
    )


def _random_measurement(cfg: SuiteConfig, d: int, flavor: str, rng: np.random.Generator) -> GroupedMeasurement:
    m = _draw(rng, cfg.n_kraus)
    if flavor == "rank-one":
        return GroupedMeasurement.from_operators(sampling.random_rank_one_measurement(d, max(m, d), rng))
    operators = sampling.random_kraus_set(d, m, rng)
    if flavor == "merged":
        return GroupedMeasurement(groups=[operators])
    if flavor == "singleton":
        return GroupedMeasurement.from_operators(operators)
    n_groups = _draw(rng, cfg.n_groups, ceiling=m)
    return GroupedMeasurement.grouped(operators, sampling.random_grouping(m, n_groups, rng))


def _inefficient_measurement(d: int, rng: np.random.Generator, max_kraus: int = 4) -> GroupedMeasurement:
    """Random measurement with at least one group of two or more operators."""
    m = int(rng.integers(2, max_kraus + 1))
    n_groups = int(rng.integers(1, m))
    operators = sampling.random_kraus_set(d, m, rng)
    return GroupedMeasurement.grouped(operators, sampling.random_grouping(m, n_groups, rng))


# ==================== Suite instances ====================

def _bounds_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    d = cfg.dims[index % len(cfg.dims)]
    flavor = BOUND_FLAVORS[index % len(BOUND_FLAVORS)]
    n_states = _draw(rng, cfg.n_states)

    if flavor == "commuting":
        states, basis = sampling.random_commuting_ensemble(d, n_states, rng)
        eps = Ensemble(probs=sampling.random_probabilities(n_states, rng), states=states)
        meas = channel_service.projective_measurement(basis)
    else:
        eps = _random_ensemble(d, n_states, rng)
        meas = _random_measurement(cfg, d, flavor, rng)

    report = information_service.bound_report(eps, meas)
    outcome = InstanceOutcome()
    outcome.rows.append(dict(zip(CSV_COLUMNS, report.csv_row(index))))

    outcome.add("sww_bound", report.gap_sww_theorem1)
    outcome.add("holevo", report.gap_holevo)
    outcome.add("generalized_hall", report.gap_gen_hall)
    outcome.add("sww_fine", report.gap_sww_fine)
    outcome.add("tightening", report.gap_holevo - report.gap_sww_theorem1)
    if report.efficient:
        outcome.add("hall_efficient", report.gap_hall)
        outcome.add("ozawa", report.avg_entropy_reduction)
    if flavor == "rank-one":
        drift = abs(report.gap_holevo - report.gap_sww_theorem1)
        outcome.add("rank_one_reduction", -max(drift, max(report.chi_j)))
    if flavor == "commuting":
        outcome.add("holevo_saturation", -abs(report.chi - report.mutual_info))
    return outcome


def _concavity_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    d = cfg.dims[index % len(cfg.dims)]
    flavor = ("grouped", "merged", "singleton")[index % 3]
    meas = _random_measurement(cfg, d, flavor, rng)
    outcome = InstanceOutcome()

    gaps = []
    for _ in range(3):
        eps = _random_ensemble(d, _draw(rng, cfg.n_states), rng)
        mixture = channel_service.ensemble_state(eps)
        average = float(eps.probs.probs @ information_service.entropy_reductions(eps, meas))
        gaps.append(information_service.avg_entropy_reduction(mixture, meas) - average)
        outcome.add("entropy_reduction_concavity", gaps[-1])

    eps = _random_ensemble(d, _draw(rng, cfg.n_states), rng)
    n_priors = int(rng.integers(2, 4))
    priors = [sampling.random_probabilities(eps.size, rng) for _ in range(n_priors)]
    weights = sampling.random_probabilities(n_priors, rng)
    mixed_prior = np.sum([w * p for w, p in zip(weights, priors)], axis=0)
    m_mixed = information_service.mutual_information_for_prior(eps.states, meas, mixed_prior / mixed_prior.sum())
    m_average = sum(
        w * information_service.mutual_information_for_prior(eps.states, meas, p)
        for w, p in zip(weights, priors)
    )
    outcome.add("prior_concavity", m_mixed - m_average)

    outcome.rows.append({
        "instance_id": index,
        "dim": d,
        "n_groups": meas.n_groups,
        "efficient": meas.efficient(),
        "gap_entropy_reduction_concavity": min(gaps),
        "gap_prior_concavity": m_mixed - m_average,
    })
    return outcome


def _classical_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    n_inputs = 2 + index % 4
    n_outputs = int(rng.integers(2, 6))
    prior = sampling.random_probabilities(n_inputs, rng)
    kernel = np.stack([sampling.random_probabilities(n_outputs, rng) for _ in range(n_inputs)])
    eps, meas = channel_service.classical_channel(ProbVector(probs=prior), kernel)

    m = information_service.mutual_information(channel_service.outcome_table(eps, meas), eps.probs)
    ds = information_service.avg_entropy_reduction(channel_service.ensemble_state(eps), meas)
    outcome = InstanceOutcome()
    outcome.add("classical_identity", -abs(m - ds))
    outcome.rows.append({
        "instance_id": index,
        "n_inputs": n_inputs,
        "n_outputs": n_outputs,
        "M": m,
        "dS": ds,
        "residual": abs(m - ds),
    })
    return outcome


def _schur_row(index: int, d: int, report) -> Dict[str, Any]:
    row = {"instance_id": index, "dim": d}
    row.update(report.model_dump(mode="json"))
    return row


def _schur_classical_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    d = 2 + index % 4
    meas = majorization_service.symmetric_classical_measurement(sampling.random_probabilities(d, rng), d)
    outcome = InstanceOutcome()
    for quantity in SchurQuantity:
        report = majorization_service.schur_check(meas, quantity, cfg.schur_pairs, cfg.bound_tol, rng)
        outcome.add(f"schur_{quantity.value}", report.worst_violation)
        outcome.rows.append(_schur_row(index, d, report))
    return outcome


def _schur_uc_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    d = UC_DIMS[index % len(UC_DIMS)]
    seed_op = np.zeros((d, d))
    seed_op[0, 0] = 1.0
    meas = majorization_service.uc_measurement_approx(seed_op, max(cfg.samples, d * d), rng)
    outcome = InstanceOutcome()
    outcome.add("uc_completeness", -meas.completeness_residual())

    for quantity in SchurQuantity:
        threshold = majorization_service.frozen_threshold(quantity, d)
        report = majorization_service.schur_check(meas, quantity, cfg.schur_pairs, threshold, rng)
        drift = majorization_service.covariance_residual(meas, quantity, settings.UC_CALIBRATION_ROTATIONS, rng)
        # margins against the frozen threshold, checked at 0
        outcome.add(f"schur_uc_{quantity.value}", report.worst_violation + threshold)
        outcome.add("rotation_invariance", threshold - drift)
        row = _schur_row(index, d, report)
        row["rotation_drift"] = drift
        outcome.rows.append(row)
    return outcome


def _dilation_instance(cfg: SuiteConfig, index: int, rng: np.random.Generator) -> InstanceOutcome:
    outcome = InstanceOutcome()

    dims = (2, 2 + index % 2)
    size = dims[0] * dims[1]
    n_states = _draw(rng, cfg.n_states)
    joint = JointEnsemble(
        probs=sampling.random_probabilities(n_states, rng),
        states=[sampling.random_density(size, rng) for _ in range(n_states)],
        dims=dims,
    )
    chi_before, chi_after = dilation_service.chi_partial_trace_check(joint, index % 2)
    outcome.add("partial_trace_monotonicity", chi_before - chi_after)

    d = 2 + index % 2
    eps = _random_ensemble(d, _draw(rng, cfg.n_states), rng)
    meas = _inefficient_measurement(d, rng)
    cert = dilation_service.theorem1_trace(eps, meas)
    outcome.add("dilation_identity", -cert.identity_residual)
    outcome.add("dilation_bound", cert.chi_Q - cert.chi_QM_doubleprime)
    outcome.add("dilation_invariance", -abs(cert.chi_QA_dilated - cert.chi_Q))
    outcome.add("dilation_chain", min(
        cert.chi_QA_dilated - cert.chi_QAM_prime,
        cert.chi_QAM_prime - cert.chi_QM_doubleprime,
    ))

    v = dilation_service.dilate(meas)
    outcome.add("isometry", -dilation_service.isometry_residual(v))
    rho = channel_service.ensemble_state(eps)
    table = channel_service.outcome_table(eps, meas)
    expected = (eps.probs.probs @ table.p_kj_given_i.reshape(eps.size, -1)).reshape(table.p_kj_given_i.shape[1:])
    expected = expected[meas.group_index, meas.position_index]
    observed = dilation_service.dilated_probabilities(rho, meas)
    outcome.add("dilation_probabilities", -float(np.max(np.abs(observed - expected))))

    drift = dilation_service.chi_unitary_invariance(eps, sampling.haar_unitary(d, rng))
    outcome.add("unitary_invariance", -drift)

    outcome.rows.append({
        "instance_id": index,
        "joint_dims": f"{dims[0]}x{dims[1]}",
        "chi_before": chi_before,
        "chi_after": chi_after,
        "dim": d,
        "n_groups": meas.n_groups,
        "chi_Q": cert.chi_Q,
        "chi_QM_doubleprime": cert.chi_QM_doubleprime,
        "M": cert.mutual_info,
        "sum_pj_chi_j": cert.sum_pj_chi_j,
        "identity_residual": cert.identity_residual,
    })
    return outcome


# ==================== Suite registry ====================

class SuiteSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    evaluate: Callable[[SuiteConfig, int, np.random.Generator], InstanceOutcome]
    instances: Callable[[SuiteConfig], int]
    tolerances: Callable[[SuiteConfig], Dict[str, float]]


def _bound_tolerances(cfg: SuiteConfig) -> Dict[str, float]:
    return {name: cfg.bound_tol for name in (
        "sww_bound", "holevo", "generalized_hall", "sww_fine", "tightening",
        "hall_efficient", "ozawa", "rank_one_reduction", "holevo_saturation",
    )}


SUITES: Dict[SuiteKind, SuiteSpec] = {
    SuiteKind.BOUNDS: SuiteSpec(
        evaluate=_bounds_instance,
        instances=lambda cfg: cfg.instances(settings.BOUNDS_INSTANCES),
        tolerances=_bound_tolerances,
    ),
    SuiteKind.CONCAVITY: SuiteSpec(
        evaluate=_concavity_instance,
        instances=lambda cfg: cfg.instances(settings.DEFAULT_INSTANCES),
        tolerances=lambda cfg: {"entropy_reduction_concavity": cfg.bound_tol, "prior_concavity": cfg.bound_tol},
    ),
    SuiteKind.CLASSICAL_EQUALITY: SuiteSpec(
        evaluate=_classical_instance,
        instances=lambda cfg: cfg.instances(settings.DEFAULT_INSTANCES),
        tolerances=lambda cfg: {"classical_identity": settings.CLASSICAL_TOL},
    ),
    SuiteKind.SCHUR_CLASSICAL: SuiteSpec(
        evaluate=_schur_classical_instance,
        instances=lambda cfg: max(4, cfg.instances(settings.DEFAULT_INSTANCES) // 20),
        tolerances=lambda cfg: {f"schur_{q.value}": cfg.bound_tol for q in SchurQuantity},
    ),
    SuiteKind.SCHUR_UC: SuiteSpec(
        evaluate=_schur_uc_instance,
        instances=lambda cfg: max(2, cfg.instances(settings.DEFAULT_INSTANCES) // 50),
        tolerances=lambda cfg: {
            "uc_completeness": settings.COMPLETENESS_TOL,
            "rotation_invariance": 0.0,
            **{f"schur_uc_{q.value}": 0.0 for q in SchurQuantity},
        },
    ),
    SuiteKind.DILATION: SuiteSpec(
        evaluate=_dilation_instance,
        instances=lambda cfg: cfg.instances(settings.DEFAULT_INSTANCES),
        tolerances=lambda cfg: {
            "partial_trace_monotonicity": cfg.bound_tol,
            "dilation_identity": settings.IDENTITY_TOL,
            "dilation_bound": cfg.bound_tol,
            "dilation_invariance": settings.IDENTITY_TOL,
            "dilation_chain": cfg.bound_tol,
            "isometry": settings.COMPLETENESS_TOL,
            "dilation_probabilities": settings.COMPLETENESS_TOL,
            "unitary_invariance": cfg.bound_tol,
        },
    ),
}


class SuiteService:
    """Service running verification suites."""

    def run_one(self, kind: SuiteKind, cfg: SuiteConfig) -> Tuple[List[Dict[str, Any]], List[CheckOutcome]]:
        """
        Run one concrete suite.

        Returns:
            Tuple of (rows ordered by instance index, one CheckOutcome per check)
        """
        spec = SUITES[kind]
        stream = STREAMS[kind]
        count = spec.instances(cfg)

        def evaluate(index: int) -> InstanceOutcome:
            return spec.evaluate(cfg, index, sampling.instance_rng(cfg.seed, index, stream))

        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                outcomes = list(pool.map(evaluate, range(count)))
        else:
            outcomes = [evaluate(index) for index in range(count)]

        rows: List[Dict[str, Any]] = []
        gaps: Dict[str, List[float]] = {}
        for outcome in outcomes:
            rows.extend(outcome.rows)
            for name, values in outcome.gaps.items():
                gaps.setdefault(name, []).extend(values)

        checks = []
        for name, tolerance in spec.tolerances(cfg).items():
            if name not in gaps:
                continue
            check = CheckOutcome.from_gaps(name, gaps[name], tolerance)
            if not check.passed:
                log_warning("Check failed", suite=kind.value, check=name,
                            failures=check.failures, min_gap=check.min_gap)
            checks.append(check)
        return rows, checks

    def calibrate(self, cfg: SuiteConfig) -> Dict[str, float]:
        """
        Measure covariance thresholds for the schur-uc suite.

        Uses as many covariant measurements per dimension as the suite would;
        the result is the value to freeze in UC_FROZEN_THRESHOLDS.
        """
        count = SUITES[SuiteKind.SCHUR_UC].instances(cfg)
        rng = sampling.instance_rng(cfg.seed, 0, CALIBRATION_STREAM)
        return majorization_service.calibrate_thresholds(UC_DIMS, cfg.samples, count, rng)

    def run_suite(self, cfg: SuiteConfig) -> SuiteResult:
        """
        Run every suite the configuration names.

        Rows and pass/fail are a pure function of the configuration; only
        wall_time_s varies between runs.
        """
        start_time = time.time()
        kinds = cfg.suites()
        log_info("Suite started", suite=cfg.suite.value, seed=cfg.seed, instances=cfg.n_instances or "default")

        rows: List[Dict[str, Any]] = []
        checks: List[CheckOutcome] = []
        for kind in kinds:
            suite_rows, suite_checks = self.run_one(kind, cfg)
            if len(kinds) > 1:
                suite_rows = [{"suite": kind.value, **row} for row in suite_rows]
                suite_checks = [check.model_copy(update={"name": f"{kind.value}/{check.name}"}) for check in suite_checks]
            rows.extend(suite_rows)
            checks.extend(suite_checks)

        passed = all(check.passed for check in checks)
        wall_time = round(time.time() - start_time, 3)
        log_info("Suite finished", suite=cfg.suite.value, passed=passed, wall_time_s=wall_time)
        return SuiteResult(
            suite=cfg.suite.value,
            seed=cfg.seed,
            rows=rows,
            checks=checks,
            passed=passed,
            wall_time_s=wall_time,
        )

    # ==================== Rendering ====================

    @staticmethod
    def to_csv(result: SuiteResult) -> str:
        """Rows as CSV; columns in first-seen order, floats via repr."""
        columns: List[str] = []
        for row in result.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in result.rows:
            writer.writerow([format_cell(row.get(column)) for column in columns])
        return buffer.getvalue()

    @staticmethod
    def to_json(result: SuiteResult) -> str:
        return json.dumps(result.model_dump(mode="json"), indent=2)

    @staticmethod
    def summary(result: SuiteResult) -> str:
        """Human-readable summary for standard output."""
        lines = [f"suite {result.suite} seed={result.seed}: {'PASS' if result.passed else 'FAIL'}"]
        for check in result.checks:
            min_gap = "n/a" if check.min_gap is None else f"{check.min_gap:.3e}"
            lines.append(
                f"  {'ok  ' if check.passed else 'FAIL'} {check.name:<48} "
                f"count={check.count:<5} failures={check.failures:<4} min_gap={min_gap} tol={check.tolerance:.1e}"
            )
        lines.append(f"  rows={len(result.rows)} wall_time={result.wall_time_s:.2f}s")
        return "\n".join(lines)

    def write(self, result: SuiteResult, path: str, fmt: OutputFormat) -> None:
        """
        Write the result to a file.

        Raises:
            OutputError: If the file cannot be written
        """
        text = self.to_csv(result) if fmt == OutputFormat.CSV else self.to_json(result) + "\n"
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e.strerror or e}")
        log_info("Suite output written", path=path, format=fmt.value)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


suite_service = SuiteService()

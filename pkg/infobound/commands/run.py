"""
`run` verb.
Executes verification suites and reports per-check outcomes.
"""

import argparse
import json
from pathlib import Path

from infobound.config import settings
from infobound.middleware import handle_command_errors, log_command
from infobound.models.request import OutputFormat, SuiteConfig, SuiteKind, parse_dims, parse_range
from infobound.services.suite_service import suite_service
from infobound.utils.exceptions import ConfigurationError, OutputError


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("run", help="Run a verification suite")
    parser.add_argument("suite", choices=[kind.value for kind in SuiteKind])
    parser.add_argument("--dim", default=settings.DEFAULT_DIMS, help="Comma-separated dimensions")
    parser.add_argument("--states", default="2:4", help="Coding states per instance (lo:hi)")
    parser.add_argument("--kraus", default="2:6", help="Kraus operators per measurement (lo:hi)")
    parser.add_argument("--groups", default="1:6", help="Observed groups per measurement (lo:hi)")
    parser.add_argument("--instances", type=int, default=None,
                        help="Instances per suite (default: BOUNDS_INSTANCES for bounds, DEFAULT_INSTANCES otherwise)")
    parser.add_argument("--samples", type=int, default=settings.UC_SAMPLES, help="Haar samples (schur-uc)")
    parser.add_argument("--pairs", type=int, default=settings.SCHUR_PAIRS, help="Majorized pairs per check")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--tol", type=float, default=None, help="Override the bound tolerance (bits)")
    parser.add_argument("--workers", type=int, default=settings.WORKERS)
    parser.add_argument("--out", default=None, help="Write rows (csv) or the full result (json) here")
    parser.add_argument("--format", choices=[fmt.value for fmt in OutputFormat], default="csv")
    parser.add_argument("--calibrate", action="store_true",
                        help="schur-uc only: print measured covariance thresholds instead of running")
    parser.set_defaults(handler=run)


def build_config(args: argparse.Namespace) -> SuiteConfig:
    return SuiteConfig(
        suite=SuiteKind(args.suite),
        dims=parse_dims(args.dim),
        n_instances=args.instances,
        n_states=parse_range(args.states),
        n_kraus=parse_range(args.kraus),
        n_groups=parse_range(args.groups),
        seed=args.seed,
        tolerance=args.tol,
        samples=args.samples,
        schur_pairs=args.pairs,
        workers=args.workers,
        out=args.out,
        format=OutputFormat(args.format),
    )


def calibrate(cfg: SuiteConfig) -> int:
    if cfg.suite != SuiteKind.SCHUR_UC:
        raise ConfigurationError("--calibrate applies to the schur-uc suite only")
    text = json.dumps(suite_service.calibrate(cfg), indent=2, sort_keys=True)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise OutputError(f"cannot write {cfg.out}: {e.strerror or e}")
    print(text)
    return 0


@handle_command_errors
@log_command("run")
def run(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if args.calibrate:
        return calibrate(cfg)
    result = suite_service.run_suite(cfg)
    if cfg.out:
        suite_service.write(result, cfg.out, cfg.format)
    print(suite_service.summary(result))
    return 0 if result.passed else 1

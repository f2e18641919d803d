"""
Command-line entry point.
Dispatches the compute, generate and run verbs.
"""

import argparse
import logging
from typing import List, Optional

from infobound import __description__, __version__
from infobound.commands import compute, generate, run
from infobound.utils.logger import logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infobound", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Override LOG_LEVEL for this invocation")
    subparsers = parser.add_subparsers(dest="command", required=True)
    compute.add_parser(subparsers)
    generate.add_parser(subparsers)
    run.add_parser(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments and run one verb; returns the process exit code."""
    args = build_parser().parse_args(argv)
    if args.log_level:
        level = getattr(logging, args.log_level)
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
    return args.handler(args)

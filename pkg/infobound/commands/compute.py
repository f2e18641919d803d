"""
`compute` verb.
Validates one instance file and reports every bound on it.
"""

import argparse
import json
from pathlib import Path

from infobound.middleware import handle_command_errors, log_command
from infobound.models.report import CSV_COLUMNS, BoundReport
from infobound.services import dilation_service, information_service
from infobound.services.instance_service import instance_service
from infobound.services.suite_service import format_cell
from infobound.utils.exceptions import OutputError


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("compute", help="Evaluate all bounds on an instance file")
    parser.add_argument("file", help="Instance JSON file (or the name of a bundled fixture)")
    parser.add_argument("--format", choices=["json", "csv"], default="json", help="Output format")
    parser.add_argument("--out", default=None, help="Write the report here instead of stdout")
    parser.add_argument("--certify", action="store_true", help="Include the dilation certificate")
    parser.set_defaults(handler=run)


def resolve_instance_path(name: str) -> Path:
    """The path itself when it exists, otherwise a bundled fixture of that name."""
    path = Path(name)
    if path.exists():
        return path
    fixture = instance_service.fixture_path(name)
    return fixture if fixture.exists() else path


def render_text(report: BoundReport) -> str:
    lines = [
        f"dim={report.dim} states={report.n_states} groups={report.n_groups} "
        f"efficient={report.efficient} complete={report.complete}",
        f"  M(I:J)            = {report.mutual_info:.6f} bits",
        f"  chi               = {report.chi:.6f}",
        f"  sum_j P(j) chi_j  = {report.sum_pj_chi_j:.6f}",
        f"  <dS(rho)>         = {report.avg_entropy_reduction:.6f}",
    ]
    for j, (p, chi) in enumerate(zip(report.p_j, report.chi_j)):
        lines.append(f"    j={j}: P(j)={p:.6f} chi_j={chi:.6f}")
    lines += [
        f"  gap_holevo        = {report.gap_holevo:+.3e}",
        f"  gap_sww_theorem1  = {report.gap_sww_theorem1:+.3e}",
        f"  gap_gen_hall      = {report.gap_gen_hall:+.3e}",
        f"  gap_sww_fine      = {report.gap_sww_fine:+.3e}",
    ]
    return "\n".join(lines)


@handle_command_errors
@log_command("compute")
def run(args: argparse.Namespace) -> int:
    path = resolve_instance_path(args.file)
    eps, meas = instance_service.load_domain(path)
    report = information_service.bound_report(eps, meas)

    if args.format == "csv":
        text = ",".join(CSV_COLUMNS) + "\n" + ",".join(format_cell(v) for v in report.csv_row(0)) + "\n"
    else:
        payload = {"instance": str(path), "report": report.model_dump(mode="json")}
        if args.certify:
            payload["certificate"] = dilation_service.theorem1_trace(eps, meas).model_dump(mode="json")
        text = json.dumps(payload, indent=2) + "\n"

    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise OutputError(f"cannot write {args.out}: {e.strerror or e}")
        print(render_text(report))
    else:
        print(text, end="")
    return 0

"""CLI commands for qharness."""
import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List

from ..qharness import QHarness
from ..recurrences.exceptions import ParameterRangeError, QHarnessError
from ..recurrences.params import QHParams
from ..recurrences.qnum import Mode, parse_scalar
from ..recurrences.system_solver import require_admissible
from .sweep import CSV_HEADER, PARAMETERS, flatten_row, parse_grid, run_sweep
from .utils import (
    error_record,
    find_config_path,
    load_config,
    log_info,
    resolve_options,
    set_verbosity,
    show_error,
    show_success,
    show_summary,
    show_warning,
    write_csv,
    write_json,
)
from .verify import SUITES, run_verify

SOLVE_CSV_HEADER = ["n", "lambda", "gamma", "delta", "chi", "b", "c_hat"]
CLASSIFY_CSV_HEADER = [name for name in CSV_HEADER if name != "index"]
VERIFY_CSV_HEADER = ["suite", "checked", "failed", "max_residual", "first_counterexample"]


def build_params(options: Dict[str, Any]) -> QHParams:
    mode = Mode(options["mode"])
    values = {name: parse_scalar(options[name], mode) for name in PARAMETERS}
    return QHParams(**values, mode=mode)


def _horizon(options: Dict[str, Any], minimum: int = 0) -> int:
    N = int(options["n"])
    if N < minimum:
        raise ParameterRangeError(f"--n must be at least {minimum}, got {N}")
    return N


def solve_command(args, options: Dict[str, Any]) -> int:
    """Solve the coefficient table and the Jacobi data at time t."""
    p = build_params(options)
    require_admissible(p)
    harness = QHarness(p, _horizon(options, minimum=1))
    t = parse_scalar(options["t"], p.mode)
    output = harness.solve_output(t=t)
    log_info(f"Solved {p.to_dict()} up to N={harness.N}")

    if options["format"] == "csv":
        rows = []
        for n in range(harness.N + 1):
            rows.append({
                "n": n,
                "lambda": output.lambda_[n],
                "gamma": output.gamma[n],
                "delta": output.delta[n],
                "chi": output.chi[n - 1] if n > 0 else None,
                "b": output.jacobi.b[n],
                "c_hat": output.jacobi.c_hat[n - 1] if n > 0 else None,
            })
        write_csv(rows, SOLVE_CSV_HEADER)
    else:
        write_json(output.model_dump(by_alias=True))
    return 0


def classify_command(args, options: Dict[str, Any]) -> int:
    """Classify one parameter point."""
    p = build_params(options)
    report = QHarness(p, _horizon(options)).classify()
    schema = report.to_schema()
    for note in report.notes:
        show_warning(note)

    if options["format"] == "csv":
        flat = {**schema.params, **schema.model_dump(exclude={"params"})}
        flat["notes"] = "; ".join(flat["notes"])
        flat = {key: ("true" if value else "false") if isinstance(value, bool) else value for key, value in flat.items()}
        write_csv([flat], CLASSIFY_CSV_HEADER)
    else:
        write_json(schema.model_dump())
    return 0


def sweep_command(args, options: Dict[str, Any]) -> int:
    """Classify every point of a parameter grid."""
    mode = Mode(options["mode"])
    axes = {name: parse_grid(str(options[name]), mode) for name in PARAMETERS}
    rows = run_sweep(axes, _horizon(options), mode, workers=int(options["workers"]))
    failed = sum(1 for row in rows if row.error is not None)
    if failed:
        show_warning(f"{failed} of {len(rows)} grid points failed; see the error columns")

    if options["format"] == "csv":
        write_csv([flatten_row(row) for row in rows], CSV_HEADER)
    else:
        write_json([row.model_dump() for row in rows])
    return 0


def verify_command(args, options: Dict[str, Any]) -> int:
    """Run the seeded verification suites; exit 1 when any check fails."""
    summary = run_verify(options["suite"], int(options["seed"]), _horizon(options, minimum=1), int(options["points"]))
    show_summary(
        f"Verification (seed={summary.seed}, N={summary.N})",
        [(r.suite, r.checked, r.failed, r.max_residual) for r in summary.suites],
        ["Suite", "Checked", "Failed", "Max residual"],
    )
    if summary.ok:
        show_success("All identities hold")
    else:
        first = next(r for r in summary.suites if not r.ok)
        show_warning(f"{first.suite} failed", help_text=f"First counterexample: {first.first_counterexample}")

    if options["format"] == "csv":
        write_csv(
            [{**r.model_dump(), "first_counterexample": r.first_counterexample and str(r.first_counterexample)} for r in summary.suites],
            VERIFY_CSV_HEADER,
        )
    else:
        write_json(summary.model_dump())
    return 0 if summary.ok else 1


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for name, text in (
        ("sigma", "sigma >= 0"),
        ("tau", "tau >= 0"),
        ("theta", "drift parameter theta"),
        ("eta", "drift parameter eta"),
        ("q", "q in [-1, 1 + 2 sqrt(sigma tau)]"),
    ):
        common.add_argument(f"--{name}", help=f"{text}; a rational such as 1/3 or 0.25 (default: 0)")
    common.add_argument("--n", type=int, help="Horizon N (default: 64)")
    common.add_argument("--t", help="Time t > 0 for the Jacobi data (default: 1)")
    common.add_argument("--mode", choices=[m.value for m in Mode], help="Arithmetic mode (default: exact)")
    common.add_argument("--format", choices=["json", "csv"], help="Output format (default: json)")
    common.add_argument("--seed", type=int, help="Seed for verify (default: 0)")
    common.add_argument("--suite", choices=[*SUITES, "all"], help="Suite for verify (default: all)")
    common.add_argument("--points", type=int, help="Random points per verify suite (default: 20)")
    common.add_argument("--workers", type=int, help="Sweep worker processes, 0 for one per physical core (default: 1)")
    common.add_argument("--config", help="Path to a JSON config file (default: nearest .qharness.json)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    return common


def parse_args(args=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Solve, verify and classify the coefficient recurrences of quadratic harness polynomials",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest="command", help="Commands")
    common = _common_arguments()

    subparsers.add_parser(
        "solve",
        parents=[common],
        help="Solve the coefficient table and Jacobi data for one parameter point",
        description="Solve lambda, gamma, delta, chi up to N and the rescaled Jacobi data at time t.",
    )
    subparsers.add_parser(
        "classify",
        parents=[common],
        help="Classify one parameter point",
        description="Report regime, special case, Favard positivity, boundedness and named process.",
    )
    subparsers.add_parser(
        "sweep",
        parents=[common],
        help="Classify a grid of parameter points",
        description=(
            "Parameter flags take grids: comma separated values and start:stop:step ranges, "
            "e.g. --q=-1/2:1/2:1/4 --sigma 0,1/4 (negative values need the = form)."
        ),
    )
    subparsers.add_parser(
        "verify",
        parents=[common],
        help="Run the seeded verification suites",
        description="Cross-check closed forms, residuals, Favard, symmetry and appendix identities.",
    )
    return parser.parse_args(args)


COMMANDS = {
    "solve": solve_command,
    "classify": classify_command,
    "sweep": sweep_command,
    "verify": verify_command,
}


def main(argv: List[str] = None) -> int:
    """Main entry point for the CLI; returns the process exit code."""
    args = parse_args(argv)
    if args.command is None:
        parse_args(["--help"])
    set_verbosity(args.verbose)

    try:
        config_path = Path(args.config) if args.config else find_config_path()
        options = resolve_options(args, load_config(config_path))
        if config_path is not None:
            log_info(f"Using configuration file {config_path}")
        return COMMANDS[args.command](args, options)
    except QHarnessError as e:
        write_json({"error": error_record(e).model_dump()})
        show_error(type(e).__name__, e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

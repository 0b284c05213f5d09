"""Grid sweeps over the five parameters."""
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Sequence

import psutil
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn

from ..qharness import QHarness
from ..recurrences.exceptions import ParseError, QHarnessError
from ..recurrences.params import QHParams
from ..recurrences.qnum import Mode, Scalar, format_scalar, parse_scalar
from ..recurrences.schemas import SweepRow
from .utils import console, error_record, logger

PARAMETERS = ("sigma", "tau", "theta", "eta", "q")

CSV_HEADER = [
    "index", *PARAMETERS,
    "regime", "special_case", "favard_ok", "bounded", "determinacy",
    "fixed_point", "chi_limit", "contraction_constant", "limit_ratio",
    "sign_changes", "known_process", "notes",
    "error_type", "error_message", "exit_code",
]


def _parse_range(item: str, mode: Mode) -> List[Scalar]:
    parts = item.split(":")
    if len(parts) != 3:
        raise ParseError(f"Range must look like start:stop:step, got {item!r}")
    start, stop, step = (parse_scalar(part, mode) for part in parts)
    if step <= 0:
        raise ParseError(f"Range step must be positive, got {item!r}")
    if stop < start:
        return []
    count = (stop - start) / step
    # floor with a little slack so 0:1:0.1 keeps its endpoint in float mode
    count = math.floor(count + 1e-9) if isinstance(count, float) else math.floor(count)
    return [start + k * step for k in range(count + 1)]


def parse_grid(spec: str, mode: Mode = Mode.EXACT) -> List[Scalar]:
    """Values of one axis: comma separated literals and start:stop:step ranges (stop inclusive).

    An empty spec gives an empty axis, and so an empty grid.
    """
    values: List[Scalar] = []
    for item in (part.strip() for part in spec.split(",")):
        if not item:
            continue
        if ":" in item:
            values.extend(_parse_range(item, mode))
        else:
            values.append(parse_scalar(item, mode))
    return values


def grid_points(axes: Dict[str, Sequence[Scalar]]) -> List[Dict[str, Scalar]]:
    """Cartesian product in lexicographic order over sigma, tau, theta, eta, q."""
    return [dict(zip(PARAMETERS, values)) for values in itertools.product(*(axes[name] for name in PARAMETERS))]


def default_workers() -> int:
    return psutil.cpu_count(logical=False) or 1


def evaluate_point(job) -> SweepRow:
    """Classify one grid point; errors end up in the row instead of propagating."""
    index, point, N, mode = job
    params = {name: format_scalar(value) for name, value in point.items()}
    try:
        p = QHParams(**point, mode=mode)
        report = QHarness(p, N).classify()
        return SweepRow(index=index, params=params, report=report.to_schema())
    except QHarnessError as e:
        logger.debug(f"Sweep point {index} failed: {e}")
        return SweepRow(index=index, params=params, error=error_record(e))


def run_sweep(axes: Dict[str, Sequence[Scalar]], N: int, mode: Mode, workers: int = 1) -> List[SweepRow]:
    points = grid_points(axes)
    jobs = [(index, point, N, mode) for index, point in enumerate(points)]
    workers = default_workers() if workers == 0 else workers
    logger.info(f"Sweeping {len(jobs)} points with {workers} worker(s)")

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))

    rows = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task("[cyan]Classifying grid", total=len(jobs))
        for job in jobs:
            rows.append(evaluate_point(job))
            progress.advance(task)
    return rows


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def flatten_row(row: SweepRow) -> Dict[str, Any]:
    flat: Dict[str, Any] = {"index": row.index, **row.params}
    if row.report is not None:
        report = row.report.model_dump(exclude={"params"})
        report["notes"] = "; ".join(report["notes"])
        flat.update(report)
    if row.error is not None:
        flat.update(error_type=row.error.type, error_message=row.error.message, exit_code=row.error.exit_code)
    return {key: _cell(value) for key, value in flat.items()}

"""Utility functions for the qharness CLI."""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.theme import Theme

from ..recurrences.exceptions import ParseError, QHarnessError
from ..recurrences.schemas import CliConfigSchema, ErrorRecord

CONFIG_FILENAME = ".qharness.json"

DEFAULTS: Dict[str, Any] = {
    "sigma": "0",
    "tau": "0",
    "theta": "0",
    "eta": "0",
    "q": "0",
    "n": 64,
    "t": "1",
    "mode": "exact",
    "format": "json",
    "seed": 0,
    "suite": "all",
    "points": 20,
    "workers": 1,
}

# Diagnostics go to stderr; stdout carries machine output only
console = Console(stderr=True, theme=Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "red bold",
    "success": "green",
    "help": "dim",
    "status": "bright_green",
}))

logging.basicConfig(
    level=logging.WARNING,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(console=console, rich_tracebacks=True)]
)

logger = logging.getLogger("qharness")


def set_verbosity(verbose: int) -> None:
    """-v shows INFO, -vv and above DEBUG."""
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logger.setLevel(level)


def show_error(message: str, error: Exception = None, help_text: str = None):
    """Show an error message with optional exception details and help text."""
    console.print(f"\n[error]Error: {message}[/]")
    if error:
        console.print(f"[error]Details: {str(error)}[/]")
    if help_text:
        console.print(f"\n[help]{help_text}[/]")


def show_warning(message: str, help_text: str = None):
    console.print(f"\n[warning]Warning: {message}[/]")
    if help_text:
        console.print(f"\n[help]{help_text}[/]")


def show_success(message: str, details: str = None):
    console.print(f"\n[success]✓ {message}[/]")
    if details:
        console.print(f"[info]{details}[/]")


def show_summary(title: str, rows: Iterable[Iterable[Any]], columns: List[str]):
    """Render a small table of results on the diagnostics console."""
    table = Table(title=title)
    for column in columns:
        table.add_column(column, style="info")
    for row in rows:
        table.add_row(*(str(value) for value in row))
    console.print(table)


def log_info(message: str):
    logger.info(message)


def find_config_path(start: Optional[Path] = None) -> Optional[Path]:
    """Walk from ``start`` (default: cwd) up through its parents looking for .qharness.json."""
    current_dir = start or Path.cwd()
    for parent in [current_dir] + list(current_dir.parents):
        config_path = parent / CONFIG_FILENAME
        if config_path.exists():
            return config_path
    return None


def load_config(path: Optional[Path]) -> CliConfigSchema:
    """Load and validate a configuration file; a missing path gives an empty config."""
    if path is None:
        return CliConfigSchema()
    try:
        with open(path, "r") as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise ParseError(f"Configuration file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in configuration file {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ParseError(f"Configuration file {path} must hold a JSON object")
    try:
        return CliConfigSchema(**raw)
    except ValidationError as e:
        raise ParseError(f"Invalid configuration file {path}: {e}") from e


def resolve_options(args, config: CliConfigSchema) -> Dict[str, Any]:
    """Explicit flag, then config file, then built-in default."""
    file_values = config.model_dump(exclude_none=True)
    options = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            options[key] = flag
        elif key in file_values:
            options[key] = file_values[key]
        else:
            options[key] = default
    return options


def write_json(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stdout.flush()


def write_csv(rows: List[Dict[str, Any]], header: List[str]) -> None:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if value is None else value for key, value in row.items()})
    sys.stdout.write(buffer.getvalue())
    sys.stdout.flush()


def error_record(error: QHarnessError) -> ErrorRecord:
    return ErrorRecord(type=type(error).__name__, message=str(error), exit_code=error.exit_code)

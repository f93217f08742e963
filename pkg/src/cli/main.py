"""
mtm-bench command line

    mtm-bench run    --config exp.ini [--seed 0] [--seeds 200] [--out runs/] [--format csv]
    mtm-bench verify runs/ [--tolerance 1e-9] [--out report.csv]
    mtm-bench sweep  --config exp.ini --param oracle.delta --values 0,1e-4,1e-3 [--out sweep/]
    mtm-bench list

Exit codes: 0 pass, 1 bound failure, 2 config error, 3 runtime error.
"""

import csv
import functools
import json
import sys
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.table import Table

from src import __version__
from src.bench.bounds import CheckStatus, verify as verify_traces
from src.bench.config import SOLVERS, load_config, read_sections
from src.bench.runner import run_batch, run_sweep
from src.bench.tracefile import read_trace
from src.core.errors import ConfigError, MTMError
from src.problems.registry import SUITE
from src.prox.geometry import ProxKind
from src.prox.subproblems import supported_combinations
from src.utils.helpers import format_scalar
from src.utils.logger import get_logger

logger = get_logger(__name__)
console = Console()

EXIT_PASS = 0
EXIT_BOUND_FAILURE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def guarded(func):
    """Maps library errors to machine-readable records and exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as error:
            click.echo(json.dumps(error.to_record()))
            sys.exit(EXIT_CONFIG)
        except (MTMError, OSError, ValueError) as error:
            logger.error(f"{type(error).__name__}: {error}")
            record = {"error": f"RUNTIME_{type(error).__name__.upper()}", "message": str(error)}
            click.echo(json.dumps(record))
            sys.exit(EXIT_RUNTIME)

    return wrapper


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


@click.group()
@click.version_option(version=__version__, message="%(version)s")
def cli():
    """Mirror Triangles Method benchmark harness."""


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--seed", type=int, default=None, help="First seed; overrides the config.")
@click.option("--seeds", type=click.IntRange(min=1), default=None, help="Number of consecutive seeds.")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@guarded
def run(config_path: Path, seed: Optional[int], seeds: Optional[int], out: Optional[Path], fmt: Optional[str]):
    """Run one configuration over its seeds and write one trace per seed."""
    config = load_config(config_path)
    update = {}
    if seed is not None or seeds is not None:
        first = config.seeds[0] if seed is None else seed
        update["seeds"] = list(range(first, first + (seeds or 1)))
    if out is not None:
        update["out"] = out
    if fmt is not None:
        update["format"] = fmt
    config = config.model_copy(update=update)

    result = run_batch(config)
    table = Table(title=f"{config.solver} on {config.problem}")
    for column in ("seed", "status", "k", "f_x", "gap", "calls_f", "calls_g"):
        table.add_column(column)
    for row in result.rows:
        table.add_row(*(_cell(row[c]) for c in ("seed", "status", "k", "f_x", "gap", "calls_f", "calls_g")))
    console.print(table)
    console.print(f"{len(result.rows)} trace(s) and summary in {result.out}")


def _collect(paths: tuple[Path, ...]) -> list[Path]:
    files: list[Path] = []
    for path in paths:
        if path.is_dir():
            files += sorted(p for p in path.iterdir() if p.suffix in (".csv", ".json") and p.name != "summary.json")
        else:
            files.append(path)
    return files


@cli.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--tolerance", type=float, default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Write the report as CSV.")
@guarded
def verify(paths: tuple[Path, ...], tolerance: Optional[float], out: Optional[Path]):
    """Check every trace against the bound its solver guarantees."""
    files = _collect(paths)
    if not files:
        raise ConfigError("TRACE_INVALID", "no trace files found")
    report = verify_traces([(p.name, read_trace(p)) for p in files], tolerance)

    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["check", "source", "index", "envelope", "observed", "tolerance", "status", "note"])
            for row in report.rows:
                writer.writerow([
                    row.check, row.source, format_scalar(row.index), format_scalar(row.envelope),
                    format_scalar(row.observed), format_scalar(row.tolerance), row.status.value, row.note,
                ])

    table = Table(title="bound report (failures and unverifiable checks)")
    for column in ("check", "source", "index", "envelope", "observed", "status", "note"):
        table.add_column(column)
    for row in report.rows:
        if row.status in (CheckStatus.FAIL, CheckStatus.UNVERIFIABLE):
            table.add_row(row.check, row.source, _cell(row.index), _cell(row.envelope),
                          _cell(row.observed), row.status.value, row.note)
    if table.row_count:
        console.print(table)
    counts = report.summary()
    console.print(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))
    console.print("PASS" if report.passed else "FAIL")
    sys.exit(EXIT_PASS if report.passed else EXIT_BOUND_FAILURE)


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--param", required=True, help="Dotted key, e.g. oracle.delta")
@click.option("--values", required=True, help="Comma-separated values")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@guarded
def sweep(config_path: Path, param: str, values: str, out: Optional[Path]):
    """Run one configuration across several values of one key."""
    sections = read_sections(config_path)
    base = load_config(config_path)
    items = [v.strip() for v in values.split(",") if v.strip()]
    if not items:
        raise ConfigError("CONFIG_INVALID", "--values is empty")
    path = run_sweep(sections, param, items, out or base.out)
    console.print(f"sweep over {param} ({len(items)} values) -> {path}")


@cli.command(name="list")
def list_cmd():
    """Show solvers, problems and prox setups."""
    solvers = Table(title="solvers")
    solvers.add_column("id")
    solvers.add_column("guarantee")
    for name, text in SOLVERS.items():
        solvers.add_row(name, text)

    problems = Table(title="problems")
    for column in ("id", "description", "minimax", "default prox"):
        problems.add_column(column)
    for name in sorted(SUITE):
        entry = SUITE[name]
        problems.add_row(name, entry.description, "yes" if entry.minimax else "no", entry.default_prox)

    prox = Table(title="prox setups (setup x Q x h)")
    prox.add_column("supported")
    for combo in supported_combinations():
        prox.add_row(combo)

    console.print(solvers)
    console.print(problems)
    console.print(prox)
    console.print(f"prox ids: {', '.join(k.value for k in ProxKind)}")


def main():
    cli()


if __name__ == "__main__":
    main()

"""
Experiment runner: builds a (solver, problem, oracle, prox) combination from
an ExperimentConfig, checks its preconditions once, then runs every seed and
writes one trace per seed plus a summary record.
"""

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from src.bench.config import ExperimentConfig, config_from_sections, override
from src.bench.tracefile import write_trace
from src.config.settings import settings
from src.core.errors import ArgumentError, CapabilityError, ConfigError, DomainError, PreconditionError
from src.core.state import Trace
from src.oracles.directional import DirectionScheme
from src.oracles.inexact import DeltaLOracle
from src.oracles.stochastic import StochasticOracle
from src.problems.base import MinimaxProblem, Problem
from src.problems.registry import get_problem
from src.prox.geometry import ProxSetup
from src.prox.subproblems import check_supported
from src.solvers.directional import (
    check_problem,
    plan_directional,
    problem_p0,
    run_directional,
    run_zeroth_order,
    zeroth_order_admissible,
)
from src.solvers.inexact import InexactMode, run_inexact
from src.solvers.minimax import run_adaptive_minimax
from src.solvers.mtm_base import run_base
from src.solvers.stochastic import check_preconditions, plan, run_stochastic
from src.utils.helpers import format_scalar, measure_time
from src.utils.logger import get_logger

logger = get_logger(__name__)

RunFn = Callable[[int], Trace]


def _smooth_problem(config: ExperimentConfig):
    problem = get_problem(config.problem)
    if isinstance(problem, MinimaxProblem):
        raise CapabilityError(
            f"solver {config.solver!r} needs a single smooth objective; "
            f"{config.problem!r} is a max of {problem.M} functions",
            ["minimax"],
        )
    return problem


def _setup(config: ExperimentConfig, problem) -> ProxSetup:
    setup = ProxSetup.from_name(config.prox_name, problem.L)
    check_supported(setup, problem.feasible, problem.h)
    return setup


def _build_base(config: ExperimentConfig) -> RunFn:
    problem = _smooth_problem(config)
    setup = _setup(config, problem)
    return lambda seed: run_base(
        problem, setup, problem.feasible, problem.x0, config.N, problem.L, epsilon=config.epsilon
    )


def _build_minimax(config: ExperimentConfig) -> RunFn:
    problem = get_problem(config.problem)
    if isinstance(problem, Problem):
        problem = problem.as_minimax()
    setup = _setup(config, problem)
    L0 = config.L0 or problem.L
    return lambda seed: run_adaptive_minimax(
        problem, setup, problem.feasible, problem.x0, config.N, L0
    )


def _build_inexact(config: ExperimentConfig) -> RunFn:
    problem = _smooth_problem(config)
    setup = _setup(config, problem)
    if config.mode == "universal":
        if config.epsilon is None:
            raise ConfigError("CONFIG_MISSING_FIELD", "universal mode needs plan.epsilon")
        mode = InexactMode.universal(config.epsilon)
    else:
        mode = InexactMode.fixed_delta()
    L0 = config.L0 or problem.L

    def run(seed: int) -> Trace:
        oracle = DeltaLOracle(problem, config.delta, config.perturbation, seed)
        return run_inexact(oracle, None, setup, problem.feasible, problem.x0, config.N, L0, mode)

    return run


def _build_stochastic(config: ExperimentConfig) -> RunFn:
    problem = _smooth_problem(config)
    setup = _setup(config, problem)
    Q, L = problem.feasible, problem.L
    if not Q.bounded:
        raise ArgumentError(f"{config.problem!r} has an unbounded Q; the stochastic method needs D_Q")
    run_plan = plan(config.epsilon, config.beta, L, config.D_Q or Q.diameter(), config.D)
    check_preconditions(setup, Q, run_plan, L, config.delta, config.allow_unverified_geometry)

    def run(seed: int) -> Trace:
        inner = DeltaLOracle(problem, config.delta, config.perturbation, seed)
        oracle = StochasticOracle(inner, config.D, seed)
        return run_stochastic(
            oracle, None, setup, Q, problem.x0, run_plan, L,
            allow_unverified_geometry=config.allow_unverified_geometry,
        )

    return run


def _build_directional(config: ExperimentConfig) -> RunFn:
    problem = _smooth_problem(config)
    n, L = problem.dimension, problem.L
    check_problem(problem, DirectionScheme(config.scheme, n))
    P0 = config.P0 or problem_p0(problem, problem.x0, L).P0
    run_plan = plan_directional(P0, config.epsilon, n, L)
    if config.delta > run_plan.delta_max:
        raise PreconditionError(f"directional noise {config.delta:g} is too large", run_plan.delta_max)
    return lambda seed: run_directional(
        problem, problem.x0, run_plan, L, DirectionScheme(config.scheme, n, seed), config.delta
    )


def _build_zeroth_order(config: ExperimentConfig) -> RunFn:
    problem = _smooth_problem(config)
    n, L = problem.dimension, problem.L
    check_problem(problem, DirectionScheme(config.scheme, n))
    P0 = config.P0 or problem_p0(problem, problem.x0, L).P0
    admissible = zeroth_order_admissible(config.epsilon, n, P0)
    if config.delta > admissible:
        raise PreconditionError(f"evaluation noise {config.delta:g} is too large", admissible)
    return lambda seed: run_zeroth_order(
        problem, problem.x0, config.epsilon, config.delta, L,
        scheme=DirectionScheme(config.scheme, n, seed), P0=P0,
    )


BUILDERS: dict[str, Callable[[ExperimentConfig], RunFn]] = {
    "base": _build_base,
    "minimax": _build_minimax,
    "inexact": _build_inexact,
    "stochastic": _build_stochastic,
    "directional": _build_directional,
    "zeroth_order": _build_zeroth_order,
}


def build_run(config: ExperimentConfig) -> RunFn:
    """
    Validates the combination and its preconditions before any run starts.

    Raises:
        ConfigError: CONFIG_PRECONDITION for rejected combinations
    """
    try:
        return BUILDERS[config.solver](config)
    except (ArgumentError, CapabilityError, PreconditionError, DomainError) as error:
        raise ConfigError("CONFIG_PRECONDITION", str(error)) from error


def trace_path(config: ExperimentConfig, seed: int, out: Optional[Path] = None) -> Path:
    out = Path(config.out if out is None else out)
    return out / f"{config.solver}_{config.problem}_seed{seed}.{config.format}"


def _summary_row(seed: int, path: Path, trace: Trace) -> dict[str, Any]:
    final = trace.final
    f_star = trace.meta.get("f_star")
    return {
        "seed": seed,
        "file": path.name,
        "status": trace.status.value,
        "k": final.k,
        "f_x": final.f_x,
        "gap": None if f_star is None else final.f_x - f_star,
        "calls_f": final.calls_f,
        "calls_g": final.calls_g,
    }


def run_seed(config_data: dict, seed: int, out: str) -> dict[str, Any]:
    """Worker entry point: rebuild, run one seed, write its trace."""
    config = ExperimentConfig(**config_data)
    trace = build_run(config)(seed)
    path = write_trace(trace, trace_path(config, seed, Path(out)), config.echo(), config.format)
    return _summary_row(seed, path, trace)


@dataclass
class BatchResult:
    out: Path
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def paths(self) -> list[Path]:
        return [self.out / row["file"] for row in self.rows]

    @property
    def summary_path(self) -> Path:
        return self.out / "summary.json"


@measure_time
def run_batch(config: ExperimentConfig, out: Optional[Path] = None) -> BatchResult:
    """
    Runs every seed of `config`; traces and the summary are written in seed
    order whether or not the worker pool is used.
    """
    build_run(config)
    out = Path(config.out if out is None else out)
    out.mkdir(parents=True, exist_ok=True)
    data = config.model_dump()
    seeds = list(config.seeds)
    logger.info(f"running {config.solver} on {config.problem} for {len(seeds)} seed(s) -> {out}")

    if settings.parallel and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=settings.max_workers) as pool:
            rows = list(pool.map(run_seed, [data] * len(seeds), seeds, [str(out)] * len(seeds)))
    else:
        rows = [run_seed(data, seed, str(out)) for seed in seeds]

    result = BatchResult(out=out, rows=rows)
    gaps = [r["gap"] for r in rows if r["gap"] is not None]
    summary = {
        "config": config.echo(),
        "runs": rows,
        "mean_gap": float(np.mean(gaps)) if gaps else None,
        "max_gap": float(np.max(gaps)) if gaps else None,
    }
    result.summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return result


SWEEP_COLUMNS = ("param", "value", "seed", "status", "k", "f_x", "gap", "calls_f", "calls_g")


def run_sweep(
    sections: dict[str, dict[str, Any]],
    param: str,
    values: Sequence[str],
    out: Path,
) -> Path:
    """
    One batch per value of `param` (a dotted section.key), then a
    plot-ready sweep.csv with one row per (value, seed).
    """
    out = Path(out)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for value in values:
        config = config_from_sections(override(sections, param, value))
        result = run_batch(config, out / f"{param}={value}")
        for row in result.rows:
            cells = [row[name] for name in SWEEP_COLUMNS[2:]]
            writer.writerow([param, value] + [c if isinstance(c, str) else format_scalar(c) for c in cells])
    path = out / "sweep.csv"
    path.write_text(buffer.getvalue(), encoding="utf-8")
    logger.info(f"sweep over {param}: {len(values)} values -> {path}")
    return path

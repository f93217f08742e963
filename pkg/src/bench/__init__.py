"""
Experiment harness: config files, trace files, seeded batches and bound checks
"""

from src.bench.bounds import BoundReport, BoundRow, CheckStatus, verify
from src.bench.config import ExperimentConfig, load_config, parse_seeds
from src.bench.runner import BatchResult, build_run, run_batch, run_sweep
from src.bench.tracefile import TraceFile, read_trace, render_trace, write_trace

__all__ = [
    "BoundReport",
    "BoundRow",
    "CheckStatus",
    "verify",
    "ExperimentConfig",
    "load_config",
    "parse_seeds",
    "BatchResult",
    "build_run",
    "run_batch",
    "run_sweep",
    "TraceFile",
    "read_trace",
    "render_trace",
    "write_trace",
]

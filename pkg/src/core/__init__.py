"""
Errors, array types and run-state models
"""

from src.core.errors import (
    ArgumentError,
    CapabilityError,
    ConfigError,
    ContractViolation,
    DivergenceError,
    DomainError,
    MTMError,
    PreconditionError,
    SubproblemError,
)
from src.core.state import TRACE_COLUMNS, RunStatus, SolverState, Trace, TraceRecord

__all__ = [
    "ArgumentError",
    "CapabilityError",
    "ConfigError",
    "ContractViolation",
    "DivergenceError",
    "DomainError",
    "MTMError",
    "PreconditionError",
    "SubproblemError",
    "TRACE_COLUMNS",
    "RunStatus",
    "SolverState",
    "Trace",
    "TraceRecord",
]

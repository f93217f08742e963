from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class RunStatus(str, Enum):
    PENDING = "PENDING"
    RUNNING = "RUNNING"
    COMPLETED = "COMPLETED"
    CONVERGED = "CONVERGED"
    FAILED = "FAILED"


# Fixed CSV column order; extra columns are appended after these.
TRACE_COLUMNS = (
    "k", "f_x", "f_y", "alpha", "A", "L_k", "m_k",
    "calls_f", "calls_g", "V_to_opt", "retries", "slack",
)


class TraceRecord(BaseModel):
    k: int
    f_x: float
    f_y: Optional[float] = None
    alpha: float = 0.0
    A: float = 0.0
    L_k: Optional[float] = None
    m_k: Optional[int] = None
    calls_f: int = 0
    calls_g: int = 0
    V_to_opt: Optional[float] = None
    retries: int = 0
    slack: Optional[float] = None

    def row(self) -> List[Any]:
        """Values in TRACE_COLUMNS order."""
        return [getattr(self, name) for name in TRACE_COLUMNS]


class Iterate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray


class Trace(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    records: List[TraceRecord] = Field(default_factory=list)
    iterates: List[Iterate] = Field(default_factory=list)
    meta: Dict[str, Any] = Field(default_factory=dict)
    status: RunStatus = RunStatus.PENDING
    x_final: Optional[np.ndarray] = None

    def append(self, record: TraceRecord) -> None:
        """Adds a record; counters must not decrease."""
        if self.records:
            last = self.records[-1]
            if record.calls_f < last.calls_f or record.calls_g < last.calls_g:
                raise ValueError("oracle-call counters must be nondecreasing")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    def column(self, name: str) -> np.ndarray:
        """One column as a float array (None becomes NaN)."""
        return np.array(
            [np.nan if getattr(r, name) is None else getattr(r, name) for r in self.records],
            dtype=np.float64,
        )

    def gaps(self) -> np.ndarray:
        """f(x_k) - f* per record; requires meta['f_star']."""
        return self.column("f_x") - float(self.meta["f_star"])


class SolverState(BaseModel):
    """The triple (x_k, y_k, u_k) with its coefficients and counters."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = 0
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    alpha: float = 0.0
    A: float = 0.0
    L: Optional[float] = None
    calls_f: int = 0
    calls_g: int = 0
    draws: int = 0

    def snapshot(self) -> Iterate:
        return Iterate(x=self.x.copy(), y=self.y.copy(), u=self.u.copy())

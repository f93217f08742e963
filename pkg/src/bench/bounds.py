"""
Bound verification over trace files

Deterministic solvers are checked row by row against their envelopes.
Randomised solvers make probabilistic claims, so they are checked over the
whole batch of traces: the stochastic failure fraction against 3 beta plus a
binomial margin, the directional mean gap against 3 eps plus a CLT margin.
"""

import math
from collections import defaultdict
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.config.settings import settings
from src.bench.tracefile import TraceFile
from src.solvers.minimax import evaluation_budget, minimax_envelope
from src.solvers.mtm_base import base_envelope
from src.solvers.stochastic import failure_margin, plan as stochastic_plan, total_draws_bound


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNVERIFIABLE = "unverifiable"
    INFO = "info"


class BoundRow(BaseModel):
    check: str
    source: str
    index: Optional[int] = None
    envelope: Optional[float] = None
    observed: Optional[float] = None
    tolerance: float = 0.0
    status: CheckStatus
    note: str = ""


class BoundReport(BaseModel):
    rows: List[BoundRow] = Field(default_factory=list)

    def add(self, **fields) -> None:
        self.rows.append(BoundRow(**fields))

    def compare(self, check: str, source: str, index: Optional[int], envelope: float, observed: float,
                tolerance: float, counted: bool = True) -> None:
        passed = observed <= envelope + tolerance
        status = CheckStatus.PASS if passed else CheckStatus.FAIL
        if not counted:
            status = CheckStatus.INFO
        self.add(check=check, source=source, index=index, envelope=envelope,
                 observed=observed, tolerance=tolerance, status=status,
                 note="" if passed else "above envelope")

    def unverifiable(self, check: str, source: str, note: str) -> None:
        self.add(check=check, source=source, status=CheckStatus.UNVERIFIABLE, note=note)

    @property
    def failures(self) -> List[BoundRow]:
        return [r for r in self.rows if r.status is CheckStatus.FAIL]

    @property
    def unverified(self) -> List[BoundRow]:
        return [r for r in self.rows if r.status is CheckStatus.UNVERIFIABLE]

    @property
    def passed(self) -> bool:
        return bool(self.rows) and not self.failures and not self.unverified

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary(self) -> dict:
        counts = defaultdict(int)
        for row in self.rows:
            counts[row.status.value] += 1
        return dict(counts)


def _missing(meta: dict, *names: str) -> list[str]:
    return [n for n in names if meta.get(n) is None]


def _gaps(trace: TraceFile) -> np.ndarray:
    f_x = np.array([np.nan if v is None else v for v in trace.column("f_x")], dtype=np.float64)
    return f_x - float(trace.meta["f_star"])


def _smallest_constant(trace: TraceFile, L: float) -> float:
    """min(L0, accepted L_k): the halving can take L_k below the starting constant."""
    L0 = float(trace.meta.get("L0") or L)
    accepted = [v for v in trace.column("L_k")[1:] if v is not None]
    return min([L0] + accepted)


def _check_rate(report: BoundReport, trace: TraceFile, source: str, tolerance: float) -> None:
    meta = trace.meta
    solver = meta["solver"]
    missing = _missing(meta, "f_star", "R2", "L")
    if missing:
        report.unverifiable("rate", source, f"trace lacks {', '.join(missing)}")
        return
    if solver == "inexact" and meta.get("mode") == "universal":
        report.unverifiable("rate", source, "universal mode carries no rate bound")
        return

    L, R2 = float(meta["L"]), float(meta["R2"])
    delta = float(meta.get("delta") or 0.0)
    gaps = _gaps(trace)
    for record, gap in zip(trace.records, gaps):
        k = int(record["k"])
        if k < 1:
            continue
        if solver == "base":
            envelope = base_envelope(L, R2, k)
        else:
            envelope = minimax_envelope(L, R2, k)
            if solver == "inexact":
                envelope += 2.0 * k * delta
        report.compare("rate", source, k, envelope, float(gap), tolerance)


def _check_adaptive_audit(report: BoundReport, trace: TraceFile, source: str) -> None:
    meta = trace.meta
    L, L0 = float(meta["L"]), meta.get("L0")
    if L0 is None or float(L0) > L or not trace.records:
        return
    L0 = float(L0)
    L_k = [v for v in trace.column("L_k")[1:] if v is not None]
    if L_k:
        report.compare("L_k <= 2L", source, None, 2.0 * L, max(L_k), 0.0)
    if meta["solver"] == "minimax":
        last = trace.records[-1]
        report.compare(
            "function-set evaluations", source, int(last["k"]),
            evaluation_budget(int(last["k"]), L, L0), float(last["calls_f"]), 1e-9,
        )


def _check_stochastic(report: BoundReport, traces: list[tuple[str, TraceFile]], tolerance: float) -> None:
    failures = 0
    counted = 0
    beta = None
    for source, trace in traces:
        meta = trace.meta
        if meta.get("unverified"):
            report.unverifiable("F(x_N) - F* <= 4 eps", source, f"{meta.get('prox')} prox carries no guarantee")
            continue
        missing = _missing(meta, "f_star", "epsilon", "beta", "D_Q", "D", "L")
        if missing:
            report.unverifiable("F(x_N) - F* <= 4 eps", source, f"trace lacks {', '.join(missing)}")
            continue
        eps, beta = float(meta["epsilon"]), float(meta["beta"])
        gap = float(_gaps(trace)[-1])
        ok = gap <= 4.0 * eps + tolerance
        failures += 0 if ok else 1
        counted += 1
        report.compare("F(x_N) - F* <= 4 eps", source, meta.get("seed"), 4.0 * eps, gap, tolerance, counted=False)

        plan = stochastic_plan(eps, beta, float(meta["L"]), float(meta["D_Q"]), float(meta["D"]))
        draws = float(trace.records[-1]["calls_g"])
        report.compare(
            "total draws", source, meta.get("seed"),
            total_draws_bound(plan, plan.L, _smallest_constant(trace, plan.L)), draws, 0.0,
        )

    if counted == 0:
        return
    allowed = failure_margin(beta, counted, settings.confidence_z)
    report.add(
        check="failure fraction <= 3 beta + margin",
        source=f"{counted} runs",
        envelope=allowed,
        observed=failures / counted,
        status=CheckStatus.PASS if failures / counted <= allowed else CheckStatus.FAIL,
        note=f"{failures} of {counted} runs above 4 eps",
    )


def _check_directional(report: BoundReport, traces: list[tuple[str, TraceFile]]) -> None:
    gaps = []
    eps = None
    for source, trace in traces:
        missing = _missing(trace.meta, "f_star", "epsilon")
        if missing:
            report.unverifiable("E gap <= 3 eps", source, f"trace lacks {', '.join(missing)}")
            continue
        eps = float(trace.meta["epsilon"])
        gaps.append(float(_gaps(trace)[-1]))

    if not gaps:
        return
    if len(gaps) < 2:
        report.unverifiable(
            "E gap <= 3 eps", traces[0][0],
            "an expectation bound needs a batch of seeded runs, got one trace",
        )
        return
    runs = len(gaps)
    margin = settings.confidence_z * float(np.std(gaps, ddof=1)) / math.sqrt(runs)
    report.compare("E gap <= 3 eps", f"{runs} runs", None, 3.0 * eps + margin, float(np.mean(gaps)), 0.0)


def verify(traces: Iterable[tuple[str, TraceFile]], tolerance: Optional[float] = None) -> BoundReport:
    """
    One report over (source name, trace) pairs; traces of different solvers
    may be mixed.
    """
    tolerance = settings.bound_tolerance if tolerance is None else tolerance
    report = BoundReport()
    groups: dict[str, list[tuple[str, TraceFile]]] = defaultdict(list)
    for source, trace in traces:
        groups[trace.meta["solver"]].append((source, trace))
        if not trace.hash_ok:
            report.add(check="content hash", source=source, status=CheckStatus.INFO,
                       note="body differs from the recorded hash")

    for solver, members in groups.items():
        if solver in ("base", "minimax", "inexact"):
            for source, trace in members:
                _check_rate(report, trace, source, tolerance)
                if solver != "base" and trace.meta.get("mode") != "universal":
                    _check_adaptive_audit(report, trace, source)
        elif solver == "stochastic":
            _check_stochastic(report, members, tolerance)
        elif solver in ("directional", "zeroth_order"):
            _check_directional(report, members)
        else:
            for source, _ in members:
                report.unverifiable("rate", source, f"no bound known for solver {solver!r}")
    return report

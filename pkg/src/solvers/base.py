from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import ArgumentError, DivergenceError
from src.core.state import RunStatus, SolverState, Trace, TraceRecord
from src.core.types import Vector, as_vector
from src.prox.composite import AnyComposite, as_composite
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxSetup, bregman
from src.prox.subproblems import check_supported
from src.utils.logger import get_logger

logger = get_logger(__name__)

Callback = Callable[[SolverState], Any]


def combine(alpha: float, A_prev: float, A_next: float, u: Vector, x: Vector) -> Vector:
    """(alpha u + A_prev x) / A_next."""
    return (alpha * u + A_prev * x) / A_next


class BaseSolver(ABC):
    name = "solver"

    def __init__(
        self,
        setup: ProxSetup,
        feasible: FeasibleSet,
        h: Optional[AnyComposite] = None,
        keep_iterates: bool = False,
        callback: Optional[Callback] = None,
    ):
        self.setup = setup
        self.feasible = feasible
        self.h = as_composite(h)
        self.keep_iterates = keep_iterates
        self.callback = callback
        check_supported(setup, feasible, self.h)

    @abstractmethod
    def run(self, *args, **kwargs) -> Trace:
        """Run the method and return its trace."""

    def log_step(self, message: str) -> None:
        logger.debug(f"[{self.name}] {message}")

    def divergence_to_opt(self, x_star: Optional[Vector], u: Vector) -> Optional[float]:
        if x_star is None:
            return None
        if self.setup.is_entropy:
            u = self.setup.mirror(u)
        return bregman(self.setup, x_star, u)

    def start(self, x0: Vector, objective: Callable[[Vector], float], meta: dict) -> tuple[SolverState, Trace]:
        """
        Initial state x = y = u = x0 and the k = 0 record.

        Raises:
            ArgumentError: x0 outside Q
        """
        x0 = as_vector(x0)
        if not self.feasible.contains(x0):
            raise ArgumentError("x0 must lie in Q")
        state = SolverState(x=x0.copy(), y=x0.copy(), u=x0.copy())
        x_star = meta.get("x_star")
        x_star = None if x_star is None else np.asarray(x_star, dtype=np.float64)
        if x_star is not None and "R2" not in meta:
            meta["R2"] = self.divergence_to_opt(x_star, x0)
        trace = Trace(meta=meta, status=RunStatus.RUNNING)
        self._x_star = x_star
        f0 = objective(x0)
        trace.append(TraceRecord(k=0, f_x=f0, f_y=f0, V_to_opt=self.divergence_to_opt(x_star, x0)))
        if self.keep_iterates:
            trace.iterates.append(state.snapshot())
        logger.info(f"[{self.name}] start: {meta.get('problem', '?')}, f(x0) = {f0:.6g}")
        return state, trace

    def record(
        self,
        trace: Trace,
        state: SolverState,
        f_x: float,
        f_y: float,
        m_k: Optional[int] = None,
        retries: int = 0,
        slack: Optional[float] = None,
    ) -> None:
        trace.append(
            TraceRecord(
                k=state.k,
                f_x=f_x,
                f_y=f_y,
                alpha=state.alpha,
                A=state.A,
                L_k=state.L,
                m_k=m_k,
                calls_f=state.calls_f,
                calls_g=state.calls_g,
                V_to_opt=self.divergence_to_opt(self._x_star, state.u),
                retries=retries,
                slack=slack,
            )
        )
        if self.keep_iterates:
            trace.iterates.append(state.snapshot())
        if self.callback is not None:
            self.callback(state)

    def finish(self, trace: Trace, state: SolverState, status: RunStatus = RunStatus.COMPLETED) -> Trace:
        trace.status = status
        trace.x_final = state.x.copy()
        logger.info(
            f"[{self.name}] {status.value.lower()} after {state.k} steps, "
            f"f(x) = {trace.final.f_x:.6g}"
        )
        return trace


@dataclass
class Trial:
    """Outcome of one backtracking attempt at a candidate L."""

    accepted: bool
    x: Vector
    y: Vector
    u: Vector
    alpha: float
    A: float
    calls_f: int = 0
    calls_g: int = 0
    draws: int = 0
    m: Optional[int] = None
    slack: Optional[float] = None


class AdaptiveSolver(BaseSolver):
    """
    Backtracking on the local constant: each step starts from L_k / 2 and
    doubles until the trial's descent condition holds, so
    L_{k+1} = L_k 2^(j-1) with j retries.
    """

    def backtrack(
        self,
        state: SolverState,
        L0: float,
        trial: Callable[[float, int], Trial],
    ) -> tuple[Trial, int]:
        """
        Runs trials until one is accepted and folds it into `state`.

        Raises:
            DivergenceError: the candidate exceeds 2^guard * L0
        """
        guard = settings.divergence_factor * L0
        candidate = state.L / 2.0
        retries = 0
        while True:
            if candidate > guard:
                raise DivergenceError(
                    f"L_k exceeded {guard:g} at step {state.k + 1}; is f gradient-Lipschitz?",
                    iteration=state.k + 1,
                    L=candidate,
                )
            result = trial(candidate, retries)
            state.calls_f += result.calls_f
            state.calls_g += result.calls_g
            state.draws += result.draws
            if result.accepted:
                break
            self.log_step(f"step {state.k + 1}: reject L = {candidate:g}")
            candidate *= 2.0
            retries += 1

        state.k += 1
        state.x, state.y, state.u = result.x, result.y, result.u
        state.alpha, state.A, state.L = result.alpha, result.A, candidate
        return result, retries


def problem_meta(solver: str, problem: Any, L: float, with_optimum: bool = True, **extra) -> dict:
    """Trace metadata; x* and f* only when they describe the objective being run."""
    meta = {"solver": solver, "problem": problem.name, "L": float(L), "n": problem.dimension}
    if with_optimum and problem.has_optimum:
        meta["x_star"] = [float(v) for v in problem.x_star]
        meta["f_star"] = float(problem.f_star)
    meta.update(extra)
    return meta

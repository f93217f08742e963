"""
Mirror Triangles Method driven by a (delta, L)-oracle

Backtracking exit condition with slack s:

    f_delta(x) <= f_delta(y) + <g_delta(y), x - y> + L/2 ||x - y||^2 + s

where s = delta (fixed mode) or s = alpha_{k+1} / A_{k+1} * epsilon
(universal mode). In fixed mode F(x_N) - F* <= 8 L R^2/(N+1)^2 + 2 N delta.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import ArgumentError, SubproblemError
from src.core.state import Trace
from src.core.types import Vector
from src.oracles.inexact import DeltaLOracle
from src.prox.composite import AnyComposite
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxSetup
from src.prox.subproblems import LinearModel, prox_step
from src.solvers.base import AdaptiveSolver, Callback, Trial, combine, problem_meta
from src.solvers.minimax import Norm, minimax_envelope, model_bound
from src.solvers.schedule import solve_alpha_adaptive


@dataclass(frozen=True)
class InexactMode:
    kind: str = "fixed_delta"
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fixed_delta", "universal"):
            raise ArgumentError(f"unknown inexact mode {self.kind!r}")
        if self.epsilon < 0:
            raise ArgumentError("epsilon must be nonnegative")

    @classmethod
    def fixed_delta(cls) -> "InexactMode":
        return cls("fixed_delta")

    @classmethod
    def universal(cls, epsilon: float) -> "InexactMode":
        return cls("universal", float(epsilon))

    def slack(self, delta: float, alpha: float, A: float) -> float:
        if self.kind == "universal":
            return alpha / A * self.epsilon
        return delta


def check_descent_inexact(
    oracle: DeltaLOracle,
    x_next: Vector,
    y_next: Vector,
    g_tilde: Vector,
    f_tilde: float,
    L_candidate: float,
    slack: float,
    norm: Optional[Norm] = None,
    value_at_x: Optional[float] = None,
) -> bool:
    norm = np.linalg.norm if norm is None else norm
    x_next = np.asarray(x_next, dtype=np.float64)
    y_next = np.asarray(y_next, dtype=np.float64)
    model = LinearModel(y_next, [f_tilde], [g_tilde])
    lhs = oracle.value(x_next) if value_at_x is None else value_at_x
    rhs = model_bound(model, x_next, L_candidate, float(norm(x_next - y_next)), slack)
    return lhs <= rhs + settings.descent_tolerance


def inexact_envelope(L: float, R2: float, k: int, delta: float) -> float:
    """8 L R^2/(k+1)^2 + 2 k delta."""
    return minimax_envelope(L, R2, k) + 2.0 * k * delta


class InexactMTM(AdaptiveSolver):
    name = "inexact"

    def run(
        self,
        oracle: DeltaLOracle,
        x0: Vector,
        N: int,
        L0: float,
        mode: InexactMode,
        with_optimum: bool = True,
    ) -> Trace:
        """
        Raises:
            ArgumentError: N < 0 or L0 <= 0
            DivergenceError: L_k grew past the guard
        """
        if N < 0:
            raise ArgumentError("N must be nonnegative")
        if not L0 > 0:
            raise ArgumentError(f"L0 must be positive, got {L0!r}")

        problem, h = oracle.problem, self.h
        F = lambda x: problem.value(x) + h.value(x)  # noqa: E731
        meta = problem_meta(
            self.name, problem, problem.L, with_optimum,
            L0=float(L0), delta=float(oracle.delta), mode=mode.kind,
            epsilon=mode.epsilon, prox=self.setup.kind.value,
        )
        state, trace = self.start(x0, F, meta)
        state.L = float(L0)

        for _ in range(N):
            x_k, u_k, A_k = state.x, state.u, state.A
            outcome = {}

            def trial(L: float, retry: int) -> Trial:
                alpha = solve_alpha_adaptive(A_k, L)
                A_next = A_k + alpha
                y = combine(alpha, A_k, A_next, u_k, x_k)
                f_tilde, g_tilde = oracle.evaluate(y)
                try:
                    u = prox_step(self.setup, self.feasible, u_k, g_tilde, alpha, h)
                except SubproblemError as error:
                    raise error.at_iteration(state.k + 1) from error
                x = combine(alpha, A_k, A_next, u, x_k)
                slack = mode.slack(oracle.delta, alpha, A_next)
                accepted = check_descent_inexact(
                    oracle, x, y, g_tilde, f_tilde, L, slack, self.setup.norm
                )
                outcome["f_x"], outcome["f_y"] = F(x), F(y)
                return Trial(accepted, x, y, u, alpha, A_next, calls_f=2, calls_g=1, slack=slack)

            result, retries = self.backtrack(state, L0, trial)
            self.record(
                trace, state, outcome["f_x"], outcome["f_y"],
                retries=retries, slack=result.slack,
            )
            self.log_step(f"k={state.k} L={state.L:g} s={result.slack:.3g} F(x)={outcome['f_x']:.6g}")

        return self.finish(trace, state)


def run_inexact(
    oracle: DeltaLOracle,
    h: Optional[AnyComposite],
    setup: ProxSetup,
    Q: FeasibleSet,
    x0: Vector,
    N: int,
    L0: float,
    mode: Optional[InexactMode] = None,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    """`h=None` uses the problem's own composite term."""
    solver = InexactMTM(
        setup, Q, oracle.problem.h if h is None else h,
        keep_iterates=keep_iterates, callback=callback,
    )
    mode = InexactMode.fixed_delta() if mode is None else mode
    return solver.run(oracle, x0, N, L0, mode, with_optimum=h is None or h is oracle.problem.h)

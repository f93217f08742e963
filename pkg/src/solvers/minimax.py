"""
Adaptive Mirror Triangles Method for F(x) = max_j f_j(x) + h(x)

Each step halves the running constant, then doubles it until

    max_j f_j(x_{k+1}) <= max_j { f_j(y) + <grad f_j(y), x_{k+1} - y> } + L_{k+1}/2 ||x_{k+1} - y||^2

holds at y = y_{k+1}. One trial costs two function-set evaluations (all M
values at y and at x) and one gradient-set evaluation at y.
"""

import math
from typing import Callable, Optional, Sequence

import numpy as np

from src.config.settings import settings
from src.core.errors import ArgumentError, SubproblemError
from src.core.state import Trace
from src.core.types import Vector, as_vector
from src.problems.base import MinimaxProblem
from src.problems.functions import Objective, ShiftedFunction
from src.prox.composite import AnyComposite
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxSetup
from src.prox.subproblems import LinearModel, minimax_prox_step
from src.solvers.base import AdaptiveSolver, Callback, Trial, combine, problem_meta
from src.solvers.schedule import solve_alpha_adaptive

Norm = Callable[[Vector], float]


def model_bound(model: LinearModel, x: Vector, L: float, distance: float, extra: float = 0.0) -> float:
    """max_j l_j(x) + L/2 distance^2 + extra."""
    return model.max_value(x) + 0.5 * L * distance ** 2 + extra


def check_descent(
    problem: MinimaxProblem,
    x_next: Vector,
    y_next: Vector,
    model: LinearModel,
    L_candidate: float,
    norm: Optional[Norm] = None,
    values_at_x: Optional[Vector] = None,
) -> bool:
    """
    Exit condition of one backtracking trial; h(x_next) appears on both
    sides and cancels.
    """
    norm = np.linalg.norm if norm is None else norm
    x_next = np.asarray(x_next, dtype=np.float64)
    values = problem.values(x_next) if values_at_x is None else values_at_x
    lhs = float(np.max(values))
    rhs = model_bound(model, x_next, L_candidate, float(norm(x_next - np.asarray(y_next))))
    return lhs <= rhs + settings.descent_tolerance


def minimax_envelope(L: float, R2: float, k: int) -> float:
    """8 L R^2 / (k + 1)^2."""
    return 8.0 * L * R2 / (k + 1) ** 2


def evaluation_budget(N: int, L: float, L0: float) -> float:
    """4N + 2 log2(2L / L0): function-set evaluations after N steps."""
    return 4.0 * N + 2.0 * math.log2(2.0 * L / L0)


class AdaptiveMinimaxMTM(AdaptiveSolver):
    name = "minimax"

    def run(
        self,
        problem: MinimaxProblem,
        x0: Vector,
        N: int,
        L0: float,
        with_optimum: bool = True,
    ) -> Trace:
        """
        Raises:
            ArgumentError: N < 0 or L0 <= 0
            SubproblemError: tagged with the failing step
            DivergenceError: L_k grew past the guard
        """
        if N < 0:
            raise ArgumentError("N must be nonnegative")
        if not L0 > 0:
            raise ArgumentError(f"L0 must be positive, got {L0!r}")

        h = self.h
        meta = problem_meta(
            self.name, problem, problem.L, with_optimum,
            L0=float(L0), M=problem.M, prox=self.setup.kind.value,
        )
        state, trace = self.start(x0, lambda x: problem.value(x) + h.value(x), meta)
        state.L = float(L0)

        for _ in range(N):
            x_k, u_k, A_k = state.x, state.u, state.A
            outcome = {}

            def trial(L: float, retry: int) -> Trial:
                alpha = solve_alpha_adaptive(A_k, L)
                A_next = A_k + alpha
                y = combine(alpha, A_k, A_next, u_k, x_k)
                model = problem.linear_model(y)
                try:
                    u = minimax_prox_step(self.setup, self.feasible, u_k, model, alpha, h)
                except SubproblemError as error:
                    raise error.at_iteration(state.k + 1) from error
                x = combine(alpha, A_k, A_next, u, x_k)
                values_x = problem.values(x)
                accepted = check_descent(problem, x, y, model, L, self.setup.norm, values_x)
                outcome["f_x"] = float(np.max(values_x)) + h.value(x)
                outcome["f_y"] = float(np.max(model.values)) + h.value(y)
                return Trial(accepted, x, y, u, alpha, A_next, calls_f=2, calls_g=1)

            _, retries = self.backtrack(state, L0, trial)
            self.record(trace, state, outcome["f_x"], outcome["f_y"], retries=retries)
            self.log_step(f"k={state.k} L={state.L:g} j={retries} F(x)={outcome['f_x']:.6g}")

        return self.finish(trace, state)


def run_adaptive_minimax(
    problem: MinimaxProblem,
    setup: ProxSetup,
    Q: FeasibleSet,
    x0: Vector,
    N: int,
    L0: float,
    h: Optional[AnyComposite] = None,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    solver = AdaptiveMinimaxMTM(
        setup, Q, problem.h if h is None else h,
        keep_iterates=keep_iterates, callback=callback,
    )
    return solver.run(problem, x0, N, L0, with_optimum=h is None or h is problem.h)


def reformulate_constrained(
    f: Objective,
    f_star: float,
    constraints: Sequence[Objective],
    feasible: Optional[FeasibleSet] = None,
    x0: Optional[Vector] = None,
    L: Optional[float] = None,
    name: str = "constrained",
) -> MinimaxProblem:
    """
    max{f - f*, g_1, ..., g_K} with h = 0. Its optimal value is 0 when f* is
    the optimum of f over {g_j <= 0}.

    Raises:
        ArgumentError: f* not finite, or no way to infer the dimension or L
    """
    if not math.isfinite(f_star):
        raise ArgumentError("f_star must be finite")
    if feasible is None:
        if x0 is None:
            raise ArgumentError("pass feasible or x0 to fix the dimension")
        feasible = FeasibleSet.whole_space(as_vector(x0).size)
    if x0 is None:
        x0 = feasible.project(np.zeros(feasible.dimension))
    components = [ShiftedFunction(f, f_star), *constraints]
    if L is None:
        constants = [getattr(c, "lipschitz", None) for c in components]
        if any(c is None for c in constants):
            raise ArgumentError("L is unknown for some component; pass L explicitly")
        L = max(max(constants), 1e-12)
    return MinimaxProblem(name, components, L, feasible, x0, note="max{f - f*, g_j}")

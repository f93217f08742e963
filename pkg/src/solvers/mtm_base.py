"""
Mirror Triangles Method with a known Lipschitz constant

    y_{k+1} = (alpha_{k+1} u_k + A_k x_k) / A_{k+1}
    u_{k+1} = argmin_Q V(x, u_k) + alpha_{k+1} (<grad f(y_{k+1}), x> + h(x))
    x_{k+1} = (alpha_{k+1} u_{k+1} + A_k x_k) / A_{k+1}

with f(x_N) - f* <= 4 L R^2 / (N + 1)^2, R^2 = V(x*, x_0).
"""

from typing import Optional

from src.core.errors import ArgumentError, SubproblemError
from src.core.state import RunStatus, Trace
from src.core.types import Vector
from src.problems.base import Problem
from src.prox.composite import AnyComposite
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxSetup
from src.prox.subproblems import prox_step
from src.solvers.base import BaseSolver, Callback, combine, problem_meta
from src.solvers.schedule import next_alpha


def base_envelope(L: float, R2: float, k: int) -> float:
    """4 L R^2 / (k + 1)^2."""
    return 4.0 * L * R2 / (k + 1) ** 2


class BaseMTM(BaseSolver):
    name = "base"

    def run(
        self,
        problem: Problem,
        x0: Vector,
        N: int,
        L: float,
        epsilon: Optional[float] = None,
        R2: Optional[float] = None,
        with_optimum: bool = True,
    ) -> Trace:
        """
        Runs N steps, or fewer when `epsilon` is given and the certified
        envelope 4 L R^2/(k+1)^2 drops below it.

        Raises:
            ArgumentError: N < 0, L <= 0, or epsilon without any R^2
            SubproblemError: tagged with the failing step
        """
        if N < 0:
            raise ArgumentError("N must be nonnegative")
        if not L > 0:
            raise ArgumentError(f"L must be positive, got {L!r}")

        F = lambda x: problem.value(x) + self.h.value(x)  # noqa: E731
        meta = problem_meta(self.name, problem, L, with_optimum, prox=self.setup.kind.value)
        if R2 is not None:
            meta["R2"] = float(R2)
        if epsilon is not None:
            meta["epsilon"] = float(epsilon)
        state, trace = self.start(x0, F, meta)
        if epsilon is not None and trace.meta.get("R2") is None:
            raise ArgumentError("target-accuracy stopping needs R2 or a known optimum")

        status = RunStatus.COMPLETED
        for _ in range(N):
            alpha = next_alpha(L, state.alpha)
            A_next = state.A + alpha
            y = combine(alpha, state.A, A_next, state.u, state.x)
            g = problem.gradient(y)
            try:
                u = prox_step(self.setup, self.feasible, state.u, g, alpha, self.h)
            except SubproblemError as error:
                raise error.at_iteration(state.k + 1) from error
            x = combine(alpha, state.A, A_next, u, state.x)

            state.k += 1
            state.x, state.y, state.u = x, y, u
            state.alpha, state.A, state.L = alpha, A_next, L
            state.calls_g += 1
            self.record(trace, state, F(x), F(y))
            self.log_step(f"k={state.k} A={A_next:.4g} F(x)={trace.final.f_x:.6g}")

            if epsilon is not None and base_envelope(L, trace.meta["R2"], state.k) <= epsilon:
                status = RunStatus.CONVERGED
                break

        return self.finish(trace, state, status)


def run_base(
    problem: Problem,
    setup: ProxSetup,
    Q: FeasibleSet,
    x0: Vector,
    N: int,
    L: float,
    h: Optional[AnyComposite] = None,
    epsilon: Optional[float] = None,
    R2: Optional[float] = None,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    """
    Base method for F = f + h over Q; `h` defaults to the problem's own
    composite term.
    """
    solver = BaseMTM(
        setup, Q, problem.h if h is None else h,
        keep_iterates=keep_iterates, callback=callback,
    )
    own_h = h is None or h is problem.h
    return solver.run(problem, x0, N, L, epsilon=epsilon, R2=R2, with_optimum=own_h)

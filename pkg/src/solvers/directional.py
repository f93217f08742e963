"""
Mirror Triangles Method with a directional-derivative oracle on R^n

Works in the norm ||x||_L = sqrt(L) ||x||_2 with the closed-form schedule
alpha_{k+1} = (k + 2n) / (2 n^2). One step:

    y_{k+1} = (alpha_{k+1} u_k + A_k x_k) / A_{k+1}
    g       = n (<grad f(y_{k+1}), e> + noise) e
    u_{k+1} = u_k - (alpha_{k+1} / L) g
    x_{k+1} = y_{k+1} + n (alpha_{k+1} / A_{k+1}) (u_{k+1} - u_k)

E f(x_N) - f* <= 3 eps for N and the noise level from ``plan_directional``.
The zeroth-order variant replaces the directional derivative by a noisy
forward difference with step tau = 2 sqrt(delta / L).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.errors import ArgumentError, CapabilityError, ContractViolation, PreconditionError
from src.core.state import RunStatus, Trace
from src.core.types import Vector, as_vector
from src.oracles.directional import (
    DirectionScheme,
    SchemeKind,
    directional_eval,
    finite_diff_eval,
    zeroth_order_step,
)
from src.oracles.rng import substream
from src.problems.base import Problem
from src.prox.feasible import FeasibleSet, SetKind
from src.prox.geometry import ProxSetup
from src.prox.subproblems import prox_step
from src.solvers.base import BaseSolver, Callback, problem_meta
from src.solvers.schedule import DirectionalSchedule, ceil_guarded

# keyed sub-streams of the scheme seed
DIRECTION_STREAM = 0
NOISE_STREAM = 1
EVALUATION_STREAM = 2


@dataclass(frozen=True)
class P0Budget:
    R0: float
    gap0: float
    P0: float


def p0_budget(R0: float, gap0: float, n: int) -> P0Budget:
    """1/2 P0^2 = 1/2 R0^2 + (1 - 1/n) gap0."""
    if R0 < 0 or gap0 < 0:
        raise ArgumentError("R0 and the initial gap must be nonnegative")
    if n < 1:
        raise ArgumentError("dimension must be positive")
    return P0Budget(float(R0), float(gap0), math.sqrt(R0 * R0 + 2.0 * (1.0 - 1.0 / n) * gap0))


def problem_p0(problem: Problem, x0: Vector, L: float) -> P0Budget:
    """P0 from the known optimum, R0 = ||x0 - x*||_L."""
    if not problem.has_optimum:
        raise ArgumentError(f"{problem.name}: P0 needs a known optimum; pass an upper bound instead")
    x0 = as_vector(x0)
    R0 = math.sqrt(L) * float(np.linalg.norm(x0 - problem.x_star))
    gap0 = max(problem.value(x0) - problem.f_star, 0.0)
    return p0_budget(R0, gap0, problem.dimension)


@dataclass(frozen=True)
class DirectionalPlan:
    N: int
    delta_max: float
    P0: float
    epsilon: float
    n: int
    L: float
    already_solved: bool = False


def plan_directional(P0: float, epsilon: float, n: int, L: float) -> DirectionalPlan:
    """
    N = ceil(sqrt(2) n P0 / sqrt(eps) + 1 - 2n) and
    delta_max = min{eps^(3/4) sqrt(L) / (4 2^(1/4) sqrt(n P0)), eps^(3/2) sqrt(L) / (96 sqrt(n) P0^2)}.
    x0 is already an eps-solution when N <= 0 or eps >= P0^2 / 2.
    """
    if not (P0 > 0 and epsilon > 0 and L > 0) or n < 1:
        raise ArgumentError("P0, epsilon, L and n must be positive")
    N = ceil_guarded(math.sqrt(2.0) * n * P0 / math.sqrt(epsilon) + 1.0 - 2.0 * n)
    delta_max = min(
        epsilon ** 0.75 * math.sqrt(L) / (4.0 * 2.0 ** 0.25 * math.sqrt(n * P0)),
        epsilon ** 1.5 * math.sqrt(L) / (96.0 * math.sqrt(n) * P0 * P0),
    )
    solved = N <= 0 or epsilon >= 0.5 * P0 * P0
    return DirectionalPlan(
        N=0 if solved else N,
        delta_max=delta_max,
        P0=float(P0),
        epsilon=float(epsilon),
        n=int(n),
        L=float(L),
        already_solved=solved,
    )


def zeroth_order_admissible(epsilon: float, n: int, P0: float) -> float:
    """min{eps^(3/2) / (64 sqrt(2) n P0), eps^3 / (36864 n P0^4)}."""
    return min(
        epsilon ** 1.5 / (64.0 * math.sqrt(2.0) * n * P0),
        epsilon ** 3 / (36864.0 * n * P0 ** 4),
    )


class DirectionalMTM(BaseSolver):
    name = "directional"

    def __init__(
        self,
        L: float,
        scheme: DirectionScheme,
        delta: float = 0.0,
        keep_iterates: bool = False,
        callback: Optional[Callback] = None,
    ):
        if not L > 0:
            raise ArgumentError(f"L must be positive, got {L!r}")
        if delta < 0:
            raise ArgumentError("noise level must be nonnegative")
        super().__init__(
            ProxSetup.scaled_euclidean(L),
            FeasibleSet.whole_space(scheme.dimension),
            keep_iterates=keep_iterates,
            callback=callback,
        )
        self.L = float(L)
        self.scheme = scheme
        self.delta = float(delta)

    def estimate(self, problem: Problem, step: int, y: Vector, e: Vector) -> tuple[Vector, int, int]:
        """Gradient estimate with its (function, gradient) call costs."""
        noise = 0.0
        if self.delta > 0:
            noise = float(substream(self.scheme.seed, NOISE_STREAM, step).uniform(-self.delta, self.delta))
        return directional_eval(problem, y, e, noise, self.delta), 0, 1

    def run(self, problem: Problem, x0: Vector, plan: DirectionalPlan, **extra) -> Trace:
        n = problem.dimension
        if plan.n != n:
            raise ArgumentError(f"plan is for n = {plan.n}, problem has n = {n}")
        schedule = DirectionalSchedule(n)
        meta = problem_meta(
            self.name, problem, self.L, True,
            epsilon=plan.epsilon, P0=plan.P0, N=plan.N, delta=self.delta,
            delta_max=plan.delta_max, scheme=self.scheme.kind.value,
            seed=self.scheme.seed, prox=self.setup.kind.value, **extra,
        )
        state, trace = self.start(x0, problem.value, meta)
        state.alpha, state.A = schedule.alpha(0), schedule.A(0)
        if plan.already_solved:
            self.log_step("x0 is already an epsilon-solution")
            return self.finish(trace, state, RunStatus.CONVERGED)

        for _ in range(plan.N):
            step = state.k + 1
            alpha, A_next = schedule.alpha(step), schedule.A(step)
            y = (alpha * state.u + state.A * state.x) / A_next
            e = self.scheme.sample((DIRECTION_STREAM, step))
            g, calls_f, calls_g = self.estimate(problem, step, y, e)
            u = prox_step(self.setup, self.feasible, state.u, g, alpha)
            x = y + n * (alpha / A_next) * (u - state.u)

            state.k = step
            state.x, state.y, state.u = x, y, u
            state.alpha, state.A, state.L = alpha, A_next, self.L
            state.calls_f += calls_f
            state.calls_g += calls_g
            self.record(trace, state, problem.value(x), problem.value(y))
            self.log_step(f"k={step} f(x)={trace.final.f_x:.6g}")

        return self.finish(trace, state)


class ZerothOrderMTM(DirectionalMTM):
    """Directional method fed by forward differences of noisy function values."""

    name = "zeroth_order"

    def __init__(self, L: float, scheme: DirectionScheme, delta_eval: float, **kwargs):
        super().__init__(L, scheme, 2.0 * math.sqrt(L * delta_eval), **kwargs)
        self.delta_eval = float(delta_eval)

    def estimate(self, problem: Problem, step: int, y: Vector, e: Vector) -> tuple[Vector, int, int]:
        tau = zeroth_order_step(self.delta_eval, self.L, y)
        d1 = d2 = 0.0
        if self.delta_eval > 0:
            d1, d2 = substream(self.scheme.seed, EVALUATION_STREAM, step).uniform(
                -self.delta_eval, self.delta_eval, size=2
            )
        return finite_diff_eval(problem, y, e, tau, float(d1), float(d2), self.delta_eval), 2, 0


def check_problem(problem: Problem, scheme: DirectionScheme) -> None:
    if problem.feasible.kind is not SetKind.WHOLE_SPACE:
        raise CapabilityError(
            f"directional method runs on R^n only, got Q = {problem.feasible.kind.value}",
            [SetKind.WHOLE_SPACE.value],
        )
    if problem.h.kind != "zero":
        raise CapabilityError("directional method takes no composite term", ["zero"])
    if scheme.dimension != problem.dimension:
        raise ArgumentError("direction scheme and problem dimensions differ")


def run_directional(
    problem: Problem,
    x0: Vector,
    plan: DirectionalPlan,
    L: float,
    scheme: DirectionScheme,
    delta: float = 0.0,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    """
    Raises:
        CapabilityError: Q is not R^n or h is not zero
        PreconditionError: delta above plan.delta_max
    """
    check_problem(problem, scheme)
    if delta > plan.delta_max * (1.0 + 1e-12):
        raise PreconditionError(f"directional noise {delta:g} is too large", admissible=plan.delta_max)
    solver = DirectionalMTM(L, scheme, delta, keep_iterates=keep_iterates, callback=callback)
    return solver.run(problem, x0, plan)


def run_zeroth_order(
    problem: Problem,
    x0: Vector,
    epsilon: float,
    delta_eval: float,
    L: float,
    scheme: Optional[DirectionScheme] = None,
    P0: Optional[float] = None,
    seed: int = 0,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    """
    Directional method on forward differences; `P0` defaults to the value
    computed from the problem's known optimum.

    Raises:
        PreconditionError: delta_eval above the admissible maximum
        ContractViolation: the induced noise 2 sqrt(L delta_eval) above plan.delta_max
    """
    if delta_eval < 0:
        raise ArgumentError("evaluation noise must be nonnegative")
    n = problem.dimension
    scheme = DirectionScheme(SchemeKind.UNIFORM_SPHERE, n, seed) if scheme is None else scheme
    check_problem(problem, scheme)
    P0 = problem_p0(problem, x0, L).P0 if P0 is None else float(P0)
    admissible = zeroth_order_admissible(epsilon, n, P0)
    if delta_eval > admissible:
        raise PreconditionError(f"evaluation noise {delta_eval:g} is too large", admissible=admissible)
    plan = plan_directional(P0, epsilon, n, L)
    induced = 2.0 * math.sqrt(L * delta_eval)
    if induced > plan.delta_max * (1.0 + 1e-12):
        raise ContractViolation(
            f"induced directional noise {induced:g} exceeds the plan's {plan.delta_max:g}"
        )
    solver = ZerothOrderMTM(L, scheme, delta_eval, keep_iterates=keep_iterates, callback=callback)
    return solver.run(problem, x0, plan, delta_eval=float(delta_eval))

"""
Mirror Triangles Method with a mini-batched stochastic (delta, L)-oracle

The run length is planned up front, N = ceil(2 sqrt(3) sqrt(L) D_Q / sqrt(eps)),
and every trial draws m = max(1, ceil(3 D Omega~ alpha / eps)) gradients.
The exit condition carries the extra slack 3 D Omega~ / (L_{k+1} m_{k+1}) + delta.
With probability at least 1 - 3 beta, F(x_N) - F* <= 4 eps.

The first trial constant is L/2. After an accepted step the next trial starts
from half the accepted constant, and a rejected trial doubles it.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import ArgumentError, CapabilityError, PreconditionError, SubproblemError
from src.core.state import Trace
from src.core.types import Vector
from src.oracles.stochastic import StochasticOracle, mini_batch_eval
from src.prox.composite import AnyComposite
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxKind, ProxSetup
from src.prox.subproblems import LinearModel, prox_step
from src.solvers.base import AdaptiveSolver, Callback, Trial, combine, problem_meta
from src.solvers.minimax import model_bound
from src.solvers.schedule import ceil_guarded, solve_alpha_adaptive
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class StochasticPlan:
    epsilon: float
    beta: float
    N: int
    Omega: float
    Omega_tilde: float
    D_Q: float
    D: float
    L: float


def plan(epsilon: float, beta: float, L: float, D_Q: float, D: float) -> StochasticPlan:
    """
    Raises:
        ArgumentError: epsilon, L or D_Q not positive, beta outside (0, 1), D < 0
    """
    if not epsilon > 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon!r}")
    if not 0 < beta < 1:
        raise ArgumentError(f"beta must lie in (0, 1), got {beta!r}")
    if not L > 0:
        raise ArgumentError(f"L must be positive, got {L!r}")
    if not D_Q > 0:
        raise ArgumentError(f"D_Q must be positive, got {D_Q!r}")
    if D < 0:
        raise ArgumentError(f"D must be nonnegative, got {D!r}")
    N = ceil_guarded(2.0 * math.sqrt(3.0) * math.sqrt(L) * D_Q / math.sqrt(epsilon))
    omega = math.sqrt(2.0 * math.log(N / beta))
    return StochasticPlan(
        epsilon=float(epsilon),
        beta=float(beta),
        N=N,
        Omega=omega,
        Omega_tilde=(1.0 + omega) ** 2,
        D_Q=float(D_Q),
        D=float(D),
        L=float(L),
    )


def batch_size(D: float, Omega_tilde: float, alpha_next: float, epsilon: float) -> int:
    """max(1, ceil(3 D Omega~ alpha / eps))."""
    if not epsilon > 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon!r}")
    return max(1, ceil_guarded(3.0 * D * Omega_tilde * alpha_next / epsilon))


def delta_admissible(plan: StochasticPlan, L: float) -> float:
    """Largest oracle delta covered by the 4 eps guarantee."""
    return plan.epsilon ** 1.5 / (6.0 * math.sqrt(3.0) * math.sqrt(L) * plan.D_Q)


def total_draws_bound(plan: StochasticPlan, L: float, L0: Optional[float] = None) -> float:
    """
    (4 + log2(3L / L0)) (2 sqrt(3) sqrt(L) D_Q / sqrt(eps) + 21 D Omega~ D_Q^2 / eps^2 + 1),
    where L0 is the constant that the first trial halves (L by default).
    Pass the smallest accepted L_k instead when it is lower.
    """
    L0 = L if L0 is None else L0
    steps = 2.0 * math.sqrt(3.0) * math.sqrt(L) * plan.D_Q / math.sqrt(plan.epsilon)
    batches = 21.0 * plan.D * plan.Omega_tilde * plan.D_Q ** 2 / plan.epsilon ** 2
    return (4.0 + math.log2(3.0 * L / L0)) * (steps + batches + 1.0)


class StochasticMTM(AdaptiveSolver):
    name = "stochastic"

    def run(
        self,
        oracle: StochasticOracle,
        x0: Vector,
        plan: StochasticPlan,
        L: float,
        tags: Optional[dict] = None,
        with_optimum: bool = True,
    ) -> Trace:
        problem, h = oracle.inner.problem, self.h
        F = lambda x: problem.value(x) + h.value(x)  # noqa: E731
        meta = problem_meta(
            self.name, problem, L, with_optimum,
            L0=float(L), delta=float(oracle.delta), D=plan.D, epsilon=plan.epsilon,
            beta=plan.beta, N=plan.N, Omega_tilde=plan.Omega_tilde, D_Q=plan.D_Q,
            seed=oracle.seed, prox=self.setup.kind.value, **(tags or {}),
        )
        state, trace = self.start(x0, F, meta)
        state.L = float(L)
        eps, Dt = plan.epsilon, plan.D * plan.Omega_tilde

        for _ in range(plan.N):
            x_k, u_k, A_k = state.x, state.u, state.A
            step = state.k + 1
            outcome = {}

            def trial(L_cand: float, retry: int) -> Trial:
                alpha = solve_alpha_adaptive(A_k, L_cand)
                A_next = A_k + alpha
                y = combine(alpha, A_k, A_next, u_k, x_k)
                m = batch_size(plan.D, plan.Omega_tilde, alpha, eps)
                g_tilde = mini_batch_eval(oracle, y, m, stream=(step, retry))
                try:
                    u = prox_step(self.setup, self.feasible, u_k, g_tilde, alpha, h)
                except SubproblemError as error:
                    raise error.at_iteration(step) from error
                x = combine(alpha, A_k, A_next, u, x_k)
                slack = 3.0 * Dt / (L_cand * m) + oracle.delta
                model = LinearModel(y, [oracle.inner.value(y)], [g_tilde])
                rhs = model_bound(model, x, L_cand, self.setup.norm(x - y), slack)
                accepted = oracle.inner.value(x) <= rhs + settings.descent_tolerance
                outcome["f_x"], outcome["f_y"] = F(x), F(y)
                return Trial(
                    accepted, x, y, u, alpha, A_next,
                    calls_f=2, calls_g=m, draws=m, m=m, slack=slack,
                )

            result, retries = self.backtrack(state, L, trial)
            self.record(
                trace, state, outcome["f_x"], outcome["f_y"],
                m_k=result.m, retries=retries, slack=result.slack,
            )
            self.log_step(f"k={state.k} L={state.L:g} m={result.m} F(x)={outcome['f_x']:.6g}")

        trace.meta["draws"] = state.draws
        return self.finish(trace, state)


def check_preconditions(
    setup: ProxSetup,
    Q: FeasibleSet,
    plan: StochasticPlan,
    L: float,
    delta: float,
    allow_unverified_geometry: bool = False,
) -> dict:
    """
    Trace tags for a run that may start.

    Raises:
        ArgumentError: Q unbounded
        PreconditionError: diam Q > D_Q, or delta above the admissible level
        CapabilityError: non-Euclidean prox without `allow_unverified_geometry`
    """
    if not L > 0:
        raise ArgumentError(f"L must be positive, got {L!r}")
    if not Q.bounded:
        raise ArgumentError("the stochastic method needs a bounded Q")
    if Q.diameter() > plan.D_Q * (1.0 + 1e-12):
        raise PreconditionError(f"diam Q = {Q.diameter():g} exceeds D_Q", admissible=plan.D_Q)
    admissible = delta_admissible(plan, L)
    if delta > admissible:
        raise PreconditionError(f"oracle delta {delta:g} is too large", admissible=admissible)

    if setup.kind is ProxKind.EUCLIDEAN:
        return {}
    if not allow_unverified_geometry:
        raise CapabilityError(
            f"stochastic method is only covered for the euclidean prox, not {setup.kind.value}",
            [ProxKind.EUCLIDEAN.value],
        )
    logger.warning(f"running the stochastic method with {setup.kind.value} prox: no guarantee applies")
    return {"unverified": True}


def run_stochastic(
    oracle: StochasticOracle,
    h: Optional[AnyComposite],
    setup: ProxSetup,
    Q: FeasibleSet,
    x0: Vector,
    plan: StochasticPlan,
    L: float,
    allow_unverified_geometry: bool = False,
    keep_iterates: bool = False,
    callback: Optional[Callback] = None,
) -> Trace:
    """
    Raises:
        ArgumentError: Q unbounded
        PreconditionError: diam Q > D_Q, or the oracle delta is above the admissible level
        CapabilityError: non-Euclidean prox without `allow_unverified_geometry`
    """
    tags = check_preconditions(setup, Q, plan, L, oracle.delta, allow_unverified_geometry)
    solver = StochasticMTM(
        setup, Q, oracle.inner.problem.h if h is None else h,
        keep_iterates=keep_iterates, callback=callback,
    )
    own_h = h is None or h is oracle.inner.problem.h
    return solver.run(oracle, x0, plan, L, tags, with_optimum=own_h)


def failure_margin(beta: float, runs: int, z: float) -> float:
    """3 beta + z sqrt(3 beta (1 - 3 beta) / R): tolerated failure fraction over R runs."""
    p = min(3.0 * beta, 1.0)
    return p + z * float(np.sqrt(p * (1.0 - p) / runs))

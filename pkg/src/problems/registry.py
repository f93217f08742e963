"""
The desk-scale test-problem suite and reference optima
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import minimize

from src.core.errors import CapabilityError
from src.core.types import Vector
from src.problems.base import MinimaxProblem, Problem
from src.problems.logsumexp import LogSumExpProblem
from src.problems.max_quadratics import MaxOfQuadratics
from src.problems.quadratic import QuadraticProblem
from src.prox.feasible import FeasibleSet, SetKind
from src.prox.geometry import ProxSetup
from src.prox.subproblems import minimax_prox_step, prox_step
from src.utils.logger import get_logger

logger = get_logger(__name__)

AnyProblem = Union[Problem, MinimaxProblem]

REFERENCE_RESIDUAL = 1e-10


@dataclass(frozen=True)
class ProblemEntry:
    factory: Callable[[], AnyProblem]
    description: str
    minimax: bool = False
    default_prox: str = "euclidean"


def _quad_well() -> QuadraticProblem:
    return QuadraticProblem(
        [[2.0, 0.5], [0.5, 1.5]], [1.0, -1.0], x0=[-2.0, 3.0], name="quad_well"
    )


def _quad_ill() -> QuadraticProblem:
    return QuadraticProblem(np.diag([1.0, 10.0]), [1.0, 10.0], x0=[-1.0, -1.0], name="quad_ill")


def _quad_box() -> QuadraticProblem:
    return QuadraticProblem(
        np.diag([1.0, 4.0]), [3.0, -2.0],
        feasible=FeasibleSet.box([-1.0, -1.0], [1.0, 1.0]),
        x0=[-1.0, 1.0], name="quad_box",
    )


def _logsumexp() -> LogSumExpProblem:
    rows = np.vstack([np.eye(3), -np.eye(3)])
    return LogSumExpProblem(rows, sigma=0.5, x0=[1.0, -2.0, 0.5], name="logsumexp")


def _maxquad_sym() -> MaxOfQuadratics:
    # max{(x - 1)^2, (x + 1)^2}
    terms = [([[2.0]], [2.0], 1.0), ([[2.0]], [-2.0], 1.0)]
    return MaxOfQuadratics(terms, x0=[2.5], x_star=[0.0], f_star=1.0, name="maxquad_sym")


def _maxquad_2d() -> MaxOfQuadratics:
    # max{(x1 - 1)^2 + 2 x2^2, (x1 + 1)^2 + x2^2}; 0 = (grad f1 + grad f2)/2 at the origin
    terms = [
        (np.diag([2.0, 4.0]), [2.0, 0.0], 1.0),
        (np.diag([2.0, 2.0]), [-2.0, 0.0], 1.0),
    ]
    return MaxOfQuadratics(terms, x0=[1.5, -1.0], x_star=[0.0, 0.0], f_star=1.0, name="maxquad_2d")


def _simplex_quad() -> QuadraticProblem:
    # 1/2 ||x - c||^2 on the simplex; l-inf/l1 Lipschitz constant is also 1
    c = np.array([0.7, 0.5, -0.2])
    return QuadraticProblem(
        np.eye(3), c, c=0.5 * float(c @ c),
        feasible=FeasibleSet.simplex(3), x0=np.full(3, 1.0 / 3.0), name="simplex_quad",
    )


SUITE: dict[str, ProblemEntry] = {
    "quad_well": ProblemEntry(_quad_well, "well-conditioned 2-D quadratic"),
    "quad_ill": ProblemEntry(_quad_ill, "ill-conditioned quadratic diag(1, 10)"),
    "quad_box": ProblemEntry(_quad_box, "box-constrained separable quadratic"),
    "logsumexp": ProblemEntry(_logsumexp, "log-sum-exp over +/- coordinate rows"),
    "maxquad_sym": ProblemEntry(_maxquad_sym, "max{(x-1)^2, (x+1)^2}", minimax=True),
    "maxquad_2d": ProblemEntry(_maxquad_2d, "max of two 2-D quadratics", minimax=True),
    "simplex_quad": ProblemEntry(
        _simplex_quad, "quadratic on the simplex", default_prox="entropy_simplex"
    ),
}


def list_problems() -> list[str]:
    return sorted(SUITE)


def get_problem(name: str) -> AnyProblem:
    """
    Raises:
        CapabilityError: unknown problem id
    """
    entry = SUITE.get(name)
    if entry is None:
        raise CapabilityError(f"unknown problem {name!r}", list_problems())
    return entry.factory()


def _prox_gradient_step(problem: AnyProblem, x: Vector) -> Vector:
    setup = ProxSetup.euclidean()
    step = 1.0 / problem.L
    if isinstance(problem, MinimaxProblem):
        return minimax_prox_step(setup, problem.feasible, x, problem.linear_model(x), step, problem.h)
    return prox_step(setup, problem.feasible, x, problem.gradient(x), step, problem.h)


def stationarity_residual(problem: AnyProblem, x: Vector) -> float:
    """
    L * ||x - x+|| where x+ is one Euclidean prox-gradient step of size 1/L;
    zero exactly at a minimizer.
    """
    return problem.L * float(np.linalg.norm(x - _prox_gradient_step(problem, x)))


def _scipy_warm_start(problem: AnyProblem) -> Vector:
    Q = problem.feasible
    x0 = Q.project(problem.x0)
    bounds = list(zip(Q.lower, Q.upper)) if Q.kind is SetKind.BOX else None
    constraints = []
    if Q.kind is SetKind.SIMPLEX:
        bounds = [(0.0, None)] * Q.dimension
        constraints.append({"type": "eq", "fun": lambda x: np.sum(x) - 1.0})
    elif Q.kind is SetKind.BALL:
        constraints.append(
            {"type": "ineq", "fun": lambda x: Q.radius ** 2 - np.sum((x - Q.center) ** 2)}
        )

    if isinstance(problem, MinimaxProblem):
        # epigraph form: min t s.t. t >= f_j(x)
        n = Q.dimension
        z0 = np.append(x0, problem.value(x0))
        epi = [
            {"type": "ineq", "fun": (lambda z, f=f: z[-1] - f.value(z[:-1]))}
            for f in problem.components
        ]
        lifted = [{**c, "fun": (lambda z, c=c: c["fun"](z[:n]))} for c in constraints]
        result = minimize(
            lambda z: z[-1], z0, method="SLSQP",
            bounds=None if bounds is None else bounds + [(None, None)],
            constraints=epi + lifted, options={"maxiter": 1000, "ftol": 1e-14},
        )
        return Q.project(result.x[:-1])

    method = "SLSQP" if constraints else "L-BFGS-B"
    result = minimize(
        problem.composite_value, x0, jac=_composite_jacobian(problem),
        method=method, bounds=bounds, constraints=constraints or (),
        options={"maxiter": 5000},
    )
    return Q.project(result.x)


def _composite_jacobian(problem: Problem):
    """Gradient of f + h for a smooth h; None lets scipy difference an l1 term."""
    kind = problem.h.kind
    if kind == "l1":
        return None
    if kind == "affine":
        return lambda x: problem.gradient(x) + problem.h.c
    return problem.gradient


def reference_optimum(problem: AnyProblem, max_polish: int = 100_000) -> tuple[Vector, float]:
    """
    (x*, f*) of a problem: analytic when registered, otherwise a scipy warm
    start polished by Euclidean prox-gradient steps until the stationarity
    residual is at most 1e-10.

    Raises:
        CapabilityError: the residual cannot be certified
    """
    if problem.has_optimum:
        return problem.x_star.copy(), problem.f_star

    x = _scipy_warm_start(problem)
    residual = float("inf")
    for _ in range(max_polish):
        nxt = _prox_gradient_step(problem, x)
        residual = problem.L * float(np.linalg.norm(x - nxt))
        if residual <= REFERENCE_RESIDUAL:
            break
        x = nxt

    if residual > REFERENCE_RESIDUAL:
        raise CapabilityError(
            f"reference optimum for {problem.name!r} not certified (residual {residual:.3e})"
        )
    logger.debug(f"reference optimum for {problem.name}: residual {residual:.2e}")
    return x, problem.composite_value(x)

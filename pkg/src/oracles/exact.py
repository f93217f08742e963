from src.core.types import Vector
from src.problems.functions import Objective


def exact_eval(problem: Objective, x: Vector) -> tuple[float, Vector]:
    """Exact (f(x), grad f(x)) of an analytic problem's smooth part."""
    return problem.value(x), problem.gradient(x)

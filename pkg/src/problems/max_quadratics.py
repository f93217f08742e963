from typing import Optional, Sequence

from src.core.types import Vector
from src.problems.base import MinimaxProblem
from src.problems.functions import QuadraticFunction
from src.prox.composite import AnyComposite
from src.prox.feasible import FeasibleSet


class MaxOfQuadratics(MinimaxProblem):
    """max_j (1/2 x^T A_j x - b_j^T x + c_j) + h(x), L = max_j lambda_max(A_j)."""

    def __init__(
        self,
        terms: Sequence[tuple],
        x0: Vector,
        feasible: Optional[FeasibleSet] = None,
        h: Optional[AnyComposite] = None,
        x_star: Optional[Vector] = None,
        f_star: Optional[float] = None,
        name: str = "max_of_quadratics",
    ):
        components = [QuadraticFunction(A, b, c) for A, b, c in terms]
        feasible = feasible or FeasibleSet.whole_space(components[0].dimension)
        L = max(q.lipschitz for q in components)
        super().__init__(
            name, components, L, feasible, x0, h=h,
            x_star=x_star, f_star=f_star, note="L = max_j lambda_max(A_j)",
        )

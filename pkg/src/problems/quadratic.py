"""
Quadratic test problems with analytic optima where the structure allows
"""

from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, solve

from src.core.types import Vector, as_vector
from src.problems.base import Problem
from src.problems.functions import QuadraticFunction
from src.prox.composite import AnyComposite, as_composite
from src.prox.feasible import FeasibleSet, SetKind, project_simplex


class QuadraticProblem(Problem):
    """
    f(x) = 1/2 x^T A x - b^T x + c over Q, L = lambda_max(A)

    Analytic optimum (h = 0 only):
      - whole space: A x = b
      - box with diagonal A: coordinate-wise clip of b_i / A_ii (separable)
      - simplex with A = a*I: Euclidean projection of b / a
    """

    def __init__(
        self,
        A,
        b,
        c: float = 0.0,
        feasible: Optional[FeasibleSet] = None,
        x0: Optional[Vector] = None,
        h: Optional[AnyComposite] = None,
        name: str = "quadratic",
    ):
        f = QuadraticFunction(A, b, c)
        feasible = feasible or FeasibleSet.whole_space(f.dimension)
        x0 = feasible.project(np.zeros(f.dimension)) if x0 is None else as_vector(x0)
        super().__init__(name, f, f.lipschitz, feasible, x0, h=h, note="L = lambda_max(A)")
        if as_composite(h).kind == "zero":
            x_star = self._analytic_optimum()
            if x_star is not None:
                self.x_star = x_star
                self.f_star = self.composite_value(x_star)

    @property
    def A(self) -> np.ndarray:
        return self.f.A

    @property
    def b(self) -> Vector:
        return self.f.b

    def _analytic_optimum(self) -> Optional[Vector]:
        A, b, Q = self.f.A, self.f.b, self.feasible
        diagonal = np.allclose(A, np.diag(np.diag(A)))
        if Q.kind is SetKind.WHOLE_SPACE:
            try:
                return solve(A, b, assume_a="pos")
            except LinAlgError:
                return None
        if Q.kind is SetKind.BOX and diagonal and np.all(np.diag(A) > 0):
            return np.clip(b / np.diag(A), Q.lower, Q.upper)
        scale = A[0, 0]
        if Q.kind is SetKind.SIMPLEX and scale > 0 and np.allclose(A, scale * np.eye(b.size)):
            return project_simplex(b / scale)
        return None

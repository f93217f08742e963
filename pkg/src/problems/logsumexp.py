from typing import Optional

import numpy as np

from src.core.types import Matrix, Vector
from src.problems.base import Problem
from src.problems.functions import LogSumExpFunction
from src.prox.feasible import FeasibleSet


class LogSumExpProblem(Problem):
    """
    Smoothed max of affine functions, unconstrained.

    When the rows come in +/- pairs and the offsets vanish, f is even and
    convex, so x* = 0 and f* = sigma * ln M.
    """

    def __init__(
        self,
        rows: Matrix,
        sigma: float = 1.0,
        x0: Optional[Vector] = None,
        name: str = "logsumexp",
    ):
        f = LogSumExpFunction(rows, sigma)
        n = f.dimension
        x0 = np.zeros(n) if x0 is None else x0
        super().__init__(
            name, f, f.lipschitz, FeasibleSet.whole_space(n), x0,
            note="L = max_i ||a_i||^2 / sigma",
        )
        if _symmetric_rows(f.rows):
            self.x_star = np.zeros(n)
            self.f_star = f.sigma * float(np.log(f.rows.shape[0]))


def _symmetric_rows(rows: Matrix) -> bool:
    present = [tuple(r) for r in rows]
    for row in rows:
        mirror = tuple(-row)
        if mirror not in present:
            return False
    return True

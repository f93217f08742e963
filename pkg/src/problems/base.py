"""
Problem descriptions consumed by every solver

A ``Problem`` is a smooth f plus composite h over a feasible set Q with a
certified gradient-Lipschitz constant L. A ``MinimaxProblem`` replaces f by
max_j f_j. Both optionally carry a known optimum (x*, f*), where f* is the
optimal value of the full objective (including h).
"""

from typing import Optional, Sequence

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Matrix, Vector, as_vector
from src.problems.functions import Objective
from src.prox.composite import AnyComposite, as_composite
from src.prox.feasible import FeasibleSet
from src.prox.subproblems import LinearModel


class Problem:
    def __init__(
        self,
        name: str,
        f: Objective,
        L: float,
        feasible: FeasibleSet,
        x0: Vector,
        h: Optional[AnyComposite] = None,
        x_star: Optional[Vector] = None,
        f_star: Optional[float] = None,
        note: str = "",
    ):
        if not L > 0:
            raise ArgumentError(f"L must be positive, got {L!r}")
        self.name = name
        self.f = f
        self.L = float(L)
        self.feasible = feasible
        self.x0 = as_vector(x0)
        self.h = as_composite(h)
        self.x_star = None if x_star is None else as_vector(x_star)
        self.f_star = None if f_star is None else float(f_star)
        self.note = note
        if self.x0.size != feasible.dimension:
            raise ArgumentError("x0 does not match the dimension of Q")

    @property
    def dimension(self) -> int:
        return self.feasible.dimension

    @property
    def has_optimum(self) -> bool:
        return self.x_star is not None and self.f_star is not None

    def value(self, x: Vector) -> float:
        """Smooth part f(x)."""
        return self.f.value(x)

    def gradient(self, x: Vector) -> Vector:
        return self.f.gradient(x)

    def composite_value(self, x: Vector) -> float:
        """F(x) = f(x) + h(x)."""
        return self.f.value(x) + self.h.value(x)

    def as_minimax(self) -> "MinimaxProblem":
        return MinimaxProblem(
            self.name, [self.f], self.L, self.feasible, self.x0,
            h=self.h, x_star=self.x_star, f_star=self.f_star, note=self.note,
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, n={self.dimension}, L={self.L:g})"


class MinimaxProblem:
    """F(x) = max_j f_j(x) + h(x)."""

    def __init__(
        self,
        name: str,
        components: Sequence[Objective],
        L: float,
        feasible: FeasibleSet,
        x0: Vector,
        h: Optional[AnyComposite] = None,
        x_star: Optional[Vector] = None,
        f_star: Optional[float] = None,
        note: str = "",
    ):
        if len(components) < 1:
            raise ArgumentError("a minimax problem needs at least one component")
        if not L > 0:
            raise ArgumentError(f"L must be positive, got {L!r}")
        self.name = name
        self.components = tuple(components)
        self.L = float(L)
        self.feasible = feasible
        self.x0 = as_vector(x0)
        self.h = as_composite(h)
        self.x_star = None if x_star is None else as_vector(x_star)
        self.f_star = None if f_star is None else float(f_star)
        self.note = note

    @property
    def M(self) -> int:
        return len(self.components)

    @property
    def dimension(self) -> int:
        return self.feasible.dimension

    @property
    def has_optimum(self) -> bool:
        return self.x_star is not None and self.f_star is not None

    def values(self, x: Vector) -> Vector:
        return np.array([f.value(x) for f in self.components])

    def gradients(self, x: Vector) -> Matrix:
        return np.vstack([f.gradient(x) for f in self.components])

    def value(self, x: Vector) -> float:
        """max_j f_j(x)."""
        return float(np.max(self.values(x)))

    def composite_value(self, x: Vector) -> float:
        return self.value(x) + self.h.value(x)

    def linear_model(self, y: Vector) -> LinearModel:
        y = np.asarray(y, dtype=np.float64)
        return LinearModel(y, self.values(y), self.gradients(y))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, M={self.M}, n={self.dimension}, L={self.L:g})"

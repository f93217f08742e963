"""
Feasible sets Q with membership, Euclidean projection and diameter
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Vector, as_vector


class SetKind(str, Enum):
    WHOLE_SPACE = "whole_space"
    BOX = "box"
    SIMPLEX = "simplex"
    BALL = "ball"


def project_simplex(c: Vector) -> Vector:
    """
    Solution of min ||x - c||_2^2 s.t. sum(x) = 1, x >= 0
    """
    n = c.size
    a = -np.sort(-c)
    lambdas = (np.cumsum(a) - 1.0) / np.arange(1, n + 1)
    k = np.nonzero(a > lambdas)[0][-1]
    return np.maximum(c - lambdas[k], 0.0)


@dataclass(frozen=True)
class FeasibleSet:
    kind: SetKind
    dimension: int
    lower: Optional[Vector] = field(default=None, compare=False)
    upper: Optional[Vector] = field(default=None, compare=False)
    center: Optional[Vector] = field(default=None, compare=False)
    radius: float = 0.0

    @classmethod
    def whole_space(cls, dimension: int) -> "FeasibleSet":
        if dimension < 1:
            raise ArgumentError("dimension must be positive")
        return cls(SetKind.WHOLE_SPACE, dimension)

    @classmethod
    def box(cls, lower, upper) -> "FeasibleSet":
        lower, upper = as_vector(lower), as_vector(upper)
        if lower.shape != upper.shape or np.any(lower > upper):
            raise ArgumentError("box needs lower <= upper of equal shape")
        lower.flags.writeable = False
        upper.flags.writeable = False
        return cls(SetKind.BOX, lower.size, lower=lower, upper=upper)

    @classmethod
    def simplex(cls, dimension: int) -> "FeasibleSet":
        if dimension < 1:
            raise ArgumentError("dimension must be positive")
        return cls(SetKind.SIMPLEX, dimension)

    @classmethod
    def ball(cls, center, radius: float) -> "FeasibleSet":
        center = as_vector(center)
        if not radius > 0:
            raise ArgumentError("ball radius must be positive")
        center.flags.writeable = False
        return cls(SetKind.BALL, center.size, center=center, radius=float(radius))

    @property
    def bounded(self) -> bool:
        return self.kind is not SetKind.WHOLE_SPACE

    def contains(self, x: Vector, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dimension,):
            return False
        if self.kind is SetKind.WHOLE_SPACE:
            return bool(np.all(np.isfinite(x)))
        if self.kind is SetKind.BOX:
            return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))
        if self.kind is SetKind.SIMPLEX:
            return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol * max(1, self.dimension))
        return bool(np.linalg.norm(x - self.center) <= self.radius + tol)

    def project(self, x: Vector) -> Vector:
        """Euclidean projection onto Q."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind is SetKind.WHOLE_SPACE:
            return x.copy()
        if self.kind is SetKind.BOX:
            return np.clip(x, self.lower, self.upper)
        if self.kind is SetKind.SIMPLEX:
            return project_simplex(x)
        offset = x - self.center
        dist = np.linalg.norm(offset)
        if dist <= self.radius:
            return x.copy()
        return self.center + offset * (self.radius / dist)

    def diameter(self) -> float:
        """Euclidean diameter (inf for the whole space)."""
        if self.kind is SetKind.WHOLE_SPACE:
            return float("inf")
        if self.kind is SetKind.BOX:
            return float(np.linalg.norm(self.upper - self.lower))
        if self.kind is SetKind.SIMPLEX:
            return float(np.sqrt(2.0)) if self.dimension > 1 else 0.0
        return 2.0 * self.radius

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """`count` points of Q (rows); used by property checks."""
        n = self.dimension
        if self.kind is SetKind.WHOLE_SPACE:
            return rng.normal(scale=2.0, size=(count, n))
        if self.kind is SetKind.BOX:
            return rng.uniform(self.lower, self.upper, size=(count, n))
        if self.kind is SetKind.SIMPLEX:
            return rng.dirichlet(np.full(n, 0.7), size=count)
        directions = rng.normal(size=(count, n))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = self.radius * rng.uniform(size=(count, 1)) ** (1.0 / n)
        return self.center + radii * directions

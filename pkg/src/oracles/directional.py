"""
Random directions and directional-derivative / finite-difference estimators
"""

import math
from enum import Enum
from typing import Optional

import numpy as np

from src.core.errors import ArgumentError, ContractViolation
from src.core.types import Vector
from src.oracles.rng import substream
from src.problems.functions import Objective


class SchemeKind(str, Enum):
    UNIFORM_SPHERE = "uniform_sphere"
    UNIFORM_COORDINATE = "uniform_coordinate"


class DirectionScheme:
    """
    Unit directions e with E e e^T = I / n: uniform on the sphere, or a
    uniformly chosen signed basis vector.
    """

    def __init__(self, kind: SchemeKind, dimension: int, seed: int = 0):
        if dimension < 1:
            raise ArgumentError("dimension must be positive")
        self.kind = SchemeKind(kind)
        self.dimension = int(dimension)
        self.seed = int(seed)
        self._rng = substream(self.seed)

    def sample(self, stream: Optional[tuple[int, ...]] = None) -> Vector:
        rng = self._rng if stream is None else substream(self.seed, *stream)
        n = self.dimension
        if self.kind is SchemeKind.UNIFORM_COORDINATE:
            e = np.zeros(n)
            e[rng.integers(n)] = 1.0 if rng.integers(2) else -1.0
            return e
        while True:
            z = rng.standard_normal(n)
            norm = np.linalg.norm(z)
            if norm > 0:
                return z / norm


def sample_direction(scheme: DirectionScheme) -> Vector:
    return scheme.sample()


def directional_eval(
    problem: Objective,
    y: Vector,
    e: Vector,
    noise: float = 0.0,
    delta: float = math.inf,
) -> Vector:
    """
    n (<grad f(y), e> + noise) e

    Raises:
        ContractViolation: |noise| > delta
    """
    if abs(noise) > delta:
        raise ContractViolation(f"directional noise {noise!r} exceeds bound {delta!r}")
    e = np.asarray(e, dtype=np.float64)
    return e.size * (float(problem.gradient(y) @ e) + noise) * e


def finite_diff_eval(
    problem: Objective,
    x: Vector,
    e: Vector,
    tau: float,
    d1: float = 0.0,
    d2: float = 0.0,
    delta: float = math.inf,
) -> Vector:
    """
    (n / tau) (f(x + tau e) + d1 - f(x) - d2) e

    The induced directional noise satisfies |noise| <= L tau / 2 + 2 delta / tau.

    Raises:
        ArgumentError: tau <= 0
        ContractViolation: |d1| or |d2| > delta
    """
    if not tau > 0:
        raise ArgumentError(f"finite-difference step must be positive, got {tau!r}")
    if abs(d1) > delta or abs(d2) > delta:
        raise ContractViolation(f"evaluation noise exceeds bound {delta!r}")
    x = np.asarray(x, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    slope = (problem.value(x + tau * e) + d1 - problem.value(x) - d2) / tau
    return e.size * slope * e


def finite_diff_noise_bound(L: float, tau: float, delta: float) -> float:
    """L tau / 2 + 2 delta / tau."""
    return 0.5 * L * tau + 2.0 * delta / tau


def zeroth_order_step(delta: float, L: float, x: Optional[Vector] = None) -> float:
    """
    tau = 2 sqrt(delta / L), which makes the noise bound 2 sqrt(L delta);
    for delta = 0 the standard sqrt(machine eps) * (1 + ||x||) scale.
    """
    if delta > 0:
        return 2.0 * math.sqrt(delta / L)
    scale = 1.0 if x is None else 1.0 + float(np.linalg.norm(x))
    return math.sqrt(np.finfo(np.float64).eps) * scale

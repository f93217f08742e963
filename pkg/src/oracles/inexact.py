"""
(delta, L)-oracles built by value perturbation

The oracle answers f_delta(y) = f(y) - zeta(y) * delta with zeta(y) in [0, 1]
and leaves the gradient exact. For any x, y

    f(x) - f_delta(y) - <grad f(y), x - y>  =  [f(x) - f(y) - <grad f(y), x - y>] + zeta(y) delta

which lies in [0, L/2 ||x - y||^2 + delta], so the two-sided (delta, L)
inequality holds by construction, and f_delta(y) <= f(y) <= f_delta(y) + delta.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Vector
from src.oracles.rng import point_key, substream
from src.problems.base import Problem


class PerturbationMode(str, Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    SEEDED_RANDOM = "seeded_random"


@dataclass(frozen=True)
class DeltaLOracle:
    problem: Problem
    delta: float = 0.0
    perturbation_mode: PerturbationMode = PerturbationMode.CONSTANT
    seed: int = 0

    def __post_init__(self):
        if self.delta < 0:
            raise ArgumentError("delta must be nonnegative")
        object.__setattr__(self, "perturbation_mode", PerturbationMode(self.perturbation_mode))

    @property
    def L(self) -> float:
        return self.problem.L

    def zeta(self, y: Vector) -> float:
        """Perturbation weight in [0, 1]; a pure function of (seed, y)."""
        if self.perturbation_mode is PerturbationMode.ZERO or self.delta == 0:
            return 0.0
        if self.perturbation_mode is PerturbationMode.CONSTANT:
            return 1.0
        return float(substream(self.seed, point_key(y)).uniform())

    def value(self, y: Vector) -> float:
        return self.problem.value(y) - self.zeta(y) * self.delta

    def gradient(self, y: Vector) -> Vector:
        return self.problem.gradient(y)

    def evaluate(self, y: Vector) -> tuple[float, Vector]:
        return self.value(y), self.gradient(y)

    def linearization_gap(self, x: Vector, y: Vector) -> float:
        """f(x) - f_delta(y) - <grad f_delta(y), x - y>; lies in [0, L/2||x-y||^2 + delta]."""
        f_delta, g = self.evaluate(y)
        return self.problem.value(x) - f_delta - float(g @ (np.asarray(x) - np.asarray(y)))


def delta_eval(oracle: DeltaLOracle, y: Vector) -> tuple[float, Vector]:
    """(f_delta(y), grad f_delta(y))."""
    return oracle.evaluate(y)

"""
Composite terms h handled inside the prox subproblem
"""

from dataclasses import dataclass, field
from typing import Optional, Protocol, Union

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Vector, as_vector


class Composite(Protocol):
    kind: str

    def value(self, x: Vector) -> float:
        ...


@dataclass(frozen=True)
class ZeroComposite:
    kind: str = "zero"

    def value(self, x: Vector) -> float:
        return 0.0


@dataclass(frozen=True)
class AffineComposite:
    """h(x) = <c, x> + c0."""

    c: Vector = field(compare=False)
    c0: float = 0.0
    kind: str = "affine"

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c))

    def value(self, x: Vector) -> float:
        return float(self.c @ np.asarray(x, dtype=np.float64)) + self.c0


@dataclass(frozen=True)
class L1Composite:
    """h(x) = weight * ||x||_1."""

    weight: float
    kind: str = "l1"

    def __post_init__(self):
        if self.weight < 0:
            raise ArgumentError("l1 weight must be nonnegative")

    def value(self, x: Vector) -> float:
        return self.weight * float(np.sum(np.abs(x)))

    def soft_threshold(self, z: Vector, alpha: float) -> Vector:
        t = alpha * self.weight
        return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


AnyComposite = Union[ZeroComposite, AffineComposite, L1Composite]


def as_composite(h: Optional[AnyComposite]) -> AnyComposite:
    """None means h = 0."""
    return ZeroComposite() if h is None else h

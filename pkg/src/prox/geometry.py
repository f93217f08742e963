"""
Prox-functions, norms and Bregman divergences

Three geometries are provided:

* ``euclidean``           d(x) = 1/2 ||x||_2^2, norm l2, dual l2
* ``entropy_simplex``     d(x) = sum x_i ln x_i, norm l1, dual l-inf
* ``scaled_euclidean_L``  d(x) = L/2 ||x||_2^2, norm sqrt(L) l2, dual l2 / sqrt(L)

Each d is 1-strongly convex with respect to its norm (entropy on the simplex,
by Pinsker's inequality), so V(x, y) >= 1/2 ||x - y||^2.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import xlogy

from src.config.settings import settings
from src.core.errors import ArgumentError, DomainError
from src.core.types import Vector


class ProxKind(str, Enum):
    EUCLIDEAN = "euclidean"
    ENTROPY_SIMPLEX = "entropy_simplex"
    SCALED_EUCLIDEAN_L = "scaled_euclidean_L"


@dataclass(frozen=True)
class ProxSetup:
    kind: ProxKind
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ArgumentError("prox scale must be positive")

    @classmethod
    def euclidean(cls) -> "ProxSetup":
        return cls(ProxKind.EUCLIDEAN)

    @classmethod
    def entropy_simplex(cls) -> "ProxSetup":
        return cls(ProxKind.ENTROPY_SIMPLEX)

    @classmethod
    def scaled_euclidean(cls, L: float) -> "ProxSetup":
        return cls(ProxKind.SCALED_EUCLIDEAN_L, float(L))

    @classmethod
    def from_name(cls, name: str, L: float = 1.0) -> "ProxSetup":
        kind = ProxKind(name)
        if kind is ProxKind.SCALED_EUCLIDEAN_L:
            return cls.scaled_euclidean(L)
        return cls(kind)

    @property
    def is_entropy(self) -> bool:
        return self.kind is ProxKind.ENTROPY_SIMPLEX

    def _check_entropy_domain(self, x: Vector, strict: bool) -> None:
        bad = np.any(x <= 0) if strict else np.any(x < 0)
        if bad:
            raise DomainError(
                "entropy prox-function needs "
                + ("strictly positive" if strict else "nonnegative")
                + " coordinates"
            )

    def prox_fn(self, x: Vector) -> float:
        x = np.asarray(x, dtype=np.float64)
        if self.is_entropy:
            self._check_entropy_domain(x, strict=False)
            return float(np.sum(xlogy(x, x)))
        return 0.5 * self.scale * float(x @ x)

    def prox_grad(self, x: Vector) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if self.is_entropy:
            self._check_entropy_domain(x, strict=True)
            return np.log(np.maximum(x, settings.entropy_floor)) + 1.0
        return self.scale * x

    def norm(self, v: Vector) -> float:
        v = np.asarray(v, dtype=np.float64)
        if self.is_entropy:
            return float(np.sum(np.abs(v)))
        return float(np.sqrt(self.scale) * np.linalg.norm(v))

    def dual_norm(self, g: Vector) -> float:
        g = np.asarray(g, dtype=np.float64)
        if self.is_entropy:
            return float(np.max(np.abs(g))) if g.size else 0.0
        return float(np.linalg.norm(g) / np.sqrt(self.scale))

    def mirror(self, u: Vector) -> Vector:
        """Strictly positive copy of an entropy iterate (floor-clamped)."""
        return np.maximum(np.asarray(u, dtype=np.float64), settings.entropy_floor)


def bregman(setup: ProxSetup, x: Vector, y: Vector) -> float:
    """
    V(x, y) = d(x) - d(y) - <grad d(y), x - y>

    Raises:
        DomainError: entropy geometry with a nonpositive y (or negative x)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if setup.is_entropy:
        setup._check_entropy_domain(y, strict=True)
        setup._check_entropy_domain(x, strict=False)
        # closed form avoids cancellation between d(x) and d(y)
        value = np.sum(xlogy(x, x) - xlogy(x, y) - x + y)
        return max(float(value), 0.0)
    diff = x - y
    return 0.5 * setup.scale * float(diff @ diff)

"""
Smooth convex building blocks with analytic gradients
"""

from typing import Optional, Protocol

import numpy as np
from scipy.linalg import eigvalsh
from scipy.special import logsumexp, softmax

from src.core.errors import ArgumentError
from src.core.types import Matrix, Vector, as_vector


class Objective(Protocol):
    """
    Differentiable f with value(x) and gradient(x) of matching dimension
    """

    def value(self, x: Vector) -> float:
        ...

    def gradient(self, x: Vector) -> Vector:
        ...


class QuadraticFunction:
    """f(x) = 1/2 x^T A x - b^T x + c with A symmetric PSD."""

    def __init__(self, A, b, c: float = 0.0):
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        b = as_vector(b)
        if A.shape != (b.size, b.size):
            raise ArgumentError(f"A has shape {A.shape}, expected {(b.size, b.size)}")
        if not np.allclose(A, A.T):
            raise ArgumentError("A must be symmetric")
        eigenvalues = eigvalsh(A)
        if eigenvalues[0] < -1e-12 * max(1.0, abs(eigenvalues[-1])):
            raise ArgumentError("A must be positive semidefinite")
        self.A = A
        self.b = b
        self.c = float(c)
        self.lipschitz = float(max(eigenvalues[-1], 0.0))

    @property
    def dimension(self) -> int:
        return self.b.size

    def value(self, x: Vector) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(0.5 * x @ (self.A @ x) - self.b @ x + self.c)

    def gradient(self, x: Vector) -> Vector:
        return self.A @ np.asarray(x, dtype=np.float64) - self.b


class AffineFunction:
    """f(x) = <a, x> + a0."""

    lipschitz = 0.0

    def __init__(self, a, a0: float = 0.0):
        self.a = as_vector(a)
        self.a0 = float(a0)

    @property
    def dimension(self) -> int:
        return self.a.size

    def value(self, x: Vector) -> float:
        return float(self.a @ np.asarray(x, dtype=np.float64)) + self.a0

    def gradient(self, x: Vector) -> Vector:
        return self.a.copy()


class LogSumExpFunction:
    """
    f(x) = sigma * log sum_i exp((<a_i, x> - c_i) / sigma)

    Gradient-Lipschitz bound: the Hessian is (1/sigma) A^T (diag(p) - p p^T) A,
    dominated by (1/sigma) A^T diag(p) A, so L <= max_i ||a_i||^2 / sigma.
    """

    def __init__(self, rows: Matrix, sigma: float = 1.0, offsets: Optional[Vector] = None):
        if not sigma > 0:
            raise ArgumentError("sigma must be positive")
        self.rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        self.sigma = float(sigma)
        self.offsets = (
            np.zeros(self.rows.shape[0]) if offsets is None else as_vector(offsets)
        )
        self.lipschitz = float(np.max(np.sum(self.rows ** 2, axis=1)) / self.sigma)

    @property
    def dimension(self) -> int:
        return self.rows.shape[1]

    def _scores(self, x: Vector) -> Vector:
        return (self.rows @ np.asarray(x, dtype=np.float64) - self.offsets) / self.sigma

    def value(self, x: Vector) -> float:
        return float(self.sigma * logsumexp(self._scores(x)))

    def gradient(self, x: Vector) -> Vector:
        return self.rows.T @ softmax(self._scores(x))


class ShiftedFunction:
    """f(x) - shift."""

    def __init__(self, inner: Objective, shift: float):
        self.inner = inner
        self.shift = float(shift)
        self.lipschitz = getattr(inner, "lipschitz", None)

    def value(self, x: Vector) -> float:
        return self.inner.value(x) - self.shift

    def gradient(self, x: Vector) -> Vector:
        return self.inner.gradient(x)

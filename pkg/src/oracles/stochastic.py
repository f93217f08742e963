"""
Stochastic (delta, L)-oracle with mini-batching

Noise is drawn uniformly on a sphere of random radius r = sqrt(D) * U,
U ~ U[0, 1]. It has mean zero by symmetry and ||eta|| <= sqrt(D) surely, so
E exp(||eta||^2 / D) <= e holds exactly, not only approximately.

The gradient point y must not depend on the draws it is evaluated with; the
solvers guarantee this by construction and the oracle does not police it.
"""

from typing import Optional

import numpy as np

from src.core.errors import ArgumentError
from src.core.types import Vector
from src.oracles.inexact import DeltaLOracle
from src.oracles.rng import substream


class StochasticOracle:
    def __init__(
        self,
        inner: DeltaLOracle,
        D: float,
        seed: int = 0,
        noise_shape: str = "sphere_bounded",
    ):
        if D < 0:
            raise ArgumentError("variance proxy D must be nonnegative")
        if noise_shape != "sphere_bounded":
            raise ArgumentError(f"unsupported noise shape {noise_shape!r}")
        self.inner = inner
        self.D = float(D)
        self.seed = int(seed)
        self.noise_shape = noise_shape
        self._rng = substream(self.seed)

    @property
    def delta(self) -> float:
        return self.inner.delta

    @property
    def dimension(self) -> int:
        return self.inner.problem.dimension

    def reset(self) -> None:
        """Rewind the sequential stream."""
        self._rng = substream(self.seed)

    def sample_noise(self, m: int, stream: Optional[tuple[int, ...]] = None) -> np.ndarray:
        """
        m independent noise vectors (rows); `stream` selects a keyed sub-stream,
        otherwise the oracle's sequential stream advances.
        """
        rng = self._rng if stream is None else substream(self.seed, *stream)
        n = self.dimension
        directions = rng.standard_normal(size=(m, n))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = np.sqrt(self.D) * rng.uniform(size=(m, 1))
        return radii * directions


def stochastic_eval(oracle: StochasticOracle, y: Vector) -> Vector:
    """One draw of grad f_delta(y) + eta."""
    g = oracle.inner.gradient(y)
    if oracle.D == 0:
        return g
    return g + oracle.sample_noise(1)[0]


def mini_batch_eval(
    oracle: StochasticOracle,
    y: Vector,
    m: int,
    stream: Optional[tuple[int, ...]] = None,
) -> Vector:
    """
    Mean of m independent stochastic gradients at y

    Raises:
        ArgumentError: m < 1
    """
    if m < 1:
        raise ArgumentError(f"batch size must be positive, got {m}")
    g = oracle.inner.gradient(y)
    if oracle.D == 0:
        return g
    return g + oracle.sample_noise(m, stream).mean(axis=0)

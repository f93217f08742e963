"""
Coefficient schedules (alpha_k, A_k)

Fixed L:        alpha_{k+1} = 1/(2L) + sqrt(1/(4L^2) + alpha_k^2),  A_k = L alpha_k^2
Adaptive L_k:   alpha_{k+1} is the larger root of A_k + alpha = L_{k+1} alpha^2
Directional:    alpha_0 = 1 - 1/n,  alpha_k = (k - 1 + 2n) / (2 n^2),
                A_k = ((k - 1 + 2n)^2 + k - 1) / (4 n^2)
"""

import math
from dataclasses import dataclass

import numpy as np

from src.core.errors import ArgumentError


def ceil_guarded(value: float) -> int:
    """Ceiling that ignores relative rounding noise below 1e-12."""
    return math.ceil(value - 1e-12 * max(1.0, abs(value)))


def next_alpha(L: float, alpha_k: float) -> float:
    """
    Raises:
        ArgumentError: L <= 0 or alpha_k < 0
    """
    if not L > 0:
        raise ArgumentError(f"L must be positive, got {L!r}")
    if alpha_k < 0:
        raise ArgumentError(f"alpha_k must be nonnegative, got {alpha_k!r}")
    half = 0.5 / L
    return half + math.sqrt(half * half + alpha_k * alpha_k)


def solve_alpha_adaptive(A_k: float, L: float) -> float:
    """
    Larger root of L alpha^2 - alpha - A_k = 0

    Raises:
        ArgumentError: L <= 0 or A_k < 0
    """
    if not L > 0:
        raise ArgumentError(f"L must be positive, got {L!r}")
    if A_k < 0:
        raise ArgumentError(f"A_k must be nonnegative, got {A_k!r}")
    return (1.0 + math.sqrt(1.0 + 4.0 * L * A_k)) / (2.0 * L)


@dataclass(frozen=True)
class StepSchedule:
    L: float
    alphas: np.ndarray
    A: np.ndarray

    @classmethod
    def build(cls, L: float, k_max: int) -> "StepSchedule":
        alphas = np.zeros(k_max + 1)
        for k in range(k_max):
            alphas[k + 1] = next_alpha(L, alphas[k])
        return cls(float(L), alphas, np.cumsum(alphas))


@dataclass(frozen=True)
class DirectionalSchedule:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError("dimension must be positive")

    def alpha(self, k: int) -> float:
        n = self.n
        if k == 0:
            return 1.0 - 1.0 / n
        return (k - 1 + 2 * n) / (2.0 * n * n)

    def A(self, k: int) -> float:
        n = self.n
        return ((k - 1 + 2 * n) ** 2 + k - 1) / (4.0 * n * n)


def directional_schedule(n: int, k: int) -> tuple[float, float]:
    """(alpha_k, A_k) in closed form."""
    if k < 0:
        raise ArgumentError("k must be nonnegative")
    schedule = DirectionalSchedule(n)
    return schedule.alpha(k), schedule.A(k)


def gamma_weights(schedule: DirectionalSchedule, k: int) -> np.ndarray:
    """
    Weights with x_k = sum_l gamma_k^l u_l

        gamma_0 = [1]
        gamma_{j+1}^l     = (A_j / A_{j+1}) gamma_j^l                     (l < j)
        gamma_{j+1}^j     = (A_j / A_{j+1}) gamma_j^j + (1 - n) alpha_{j+1} / A_{j+1}
        gamma_{j+1}^{j+1} = n alpha_{j+1} / A_{j+1}
    """
    if k < 0:
        raise ArgumentError("k must be nonnegative")
    n = schedule.n
    gamma = np.ones(1)
    for j in range(k):
        a_next = schedule.alpha(j + 1)
        A_j, A_next = schedule.A(j), schedule.A(j + 1)
        nxt = np.zeros(j + 2)
        nxt[: j + 1] = (A_j / A_next) * gamma
        nxt[j] += (1 - n) * a_next / A_next
        nxt[j + 1] = n * a_next / A_next
        gamma = nxt
    return gamma

"""
Bregman-proximal subproblems shared by every solver variant

``prox_step`` solves

    argmin_{x in Q}  V(x, u) + alpha * (<g, x> + h(x))

in closed form for the supported (setup, Q, h) matrix. ``minimax_prox_step``
replaces the linear term by a maximum of M linearizations and solves the
M-dimensional concave dual over the simplex by accelerated projected gradient
ascent; each dual evaluation is one ``prox_step``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.config.settings import settings
from src.core.errors import ArgumentError, CapabilityError, SubproblemError
from src.core.types import Matrix, Vector
from src.prox.composite import AffineComposite, AnyComposite, L1Composite, as_composite
from src.prox.feasible import FeasibleSet, SetKind, project_simplex
from src.prox.geometry import ProxKind, ProxSetup, bregman
from src.utils.logger import get_logger

logger = get_logger(__name__)


SUPPORTED = {
    ProxKind.EUCLIDEAN: {SetKind.WHOLE_SPACE, SetKind.BOX, SetKind.BALL, SetKind.SIMPLEX},
    ProxKind.ENTROPY_SIMPLEX: {SetKind.SIMPLEX},
    ProxKind.SCALED_EUCLIDEAN_L: {SetKind.WHOLE_SPACE},
}
L1_SUPPORTED = {(ProxKind.EUCLIDEAN, SetKind.WHOLE_SPACE), (ProxKind.EUCLIDEAN, SetKind.BOX)}


def supported_combinations() -> list[str]:
    combos = [
        f"{p.value} x {q.value} x {{zero, affine}}"
        for p, sets in SUPPORTED.items()
        for q in sorted(sets, key=lambda s: s.value)
    ]
    combos += [f"{p.value} x {q.value} x l1" for p, q in sorted(L1_SUPPORTED)]
    return combos


def check_supported(setup: ProxSetup, Q: FeasibleSet, h: Optional[AnyComposite] = None) -> None:
    """
    Raises:
        CapabilityError: the (setup, Q, h) combination has no closed-form prox
    """
    h = as_composite(h)
    ok = Q.kind in SUPPORTED[setup.kind]
    if ok and h.kind == "l1":
        ok = (setup.kind, Q.kind) in L1_SUPPORTED
    if not ok:
        raise CapabilityError(
            f"no prox for ({setup.kind.value}, {Q.kind.value}, {h.kind})",
            supported_combinations(),
        )


@dataclass(frozen=True)
class LinearModel:
    """Linearizations f_j(y) + <grad f_j(y), x - y> anchored at y."""

    anchor: Vector = field(compare=False)
    values: Vector = field(compare=False)
    gradients: Matrix = field(compare=False)

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=np.float64))
        gradients = np.atleast_2d(np.asarray(self.gradients, dtype=np.float64))
        if values.size < 1 or gradients.shape[0] != values.size:
            raise ArgumentError("model needs M >= 1 values and as many gradients")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "gradients", gradients)
        object.__setattr__(self, "anchor", np.asarray(self.anchor, dtype=np.float64))

    @property
    def count(self) -> int:
        return int(self.values.size)

    @property
    def offsets(self) -> Vector:
        """b_j with l_j(x) = b_j + <g_j, x>."""
        return self.values - self.gradients @ self.anchor

    def evaluate(self, x: Vector) -> Vector:
        return self.values + self.gradients @ (np.asarray(x, dtype=np.float64) - self.anchor)

    def max_value(self, x: Vector) -> float:
        return float(np.max(self.evaluate(x)))


def prox_step(
    setup: ProxSetup,
    Q: FeasibleSet,
    u: Vector,
    g: Vector,
    alpha: float,
    h: Optional[AnyComposite] = None,
) -> Vector:
    """
    argmin over Q of V(x, u) + alpha * (<g, x> + h(x))

    Raises:
        ArgumentError: alpha <= 0
        CapabilityError: unsupported (setup, Q, h)
    """
    if not alpha > 0:
        raise ArgumentError(f"alpha must be positive, got {alpha!r}")
    h = as_composite(h)
    check_supported(setup, Q, h)
    u = np.asarray(u, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if isinstance(h, AffineComposite):
        g = g + h.c

    if setup.is_entropy:
        w = np.log(setup.mirror(u)) - alpha * g
        w -= np.max(w)
        x = np.exp(w)
        return x / np.sum(x)

    z = u - (alpha / setup.scale) * g
    if isinstance(h, L1Composite):
        z = h.soft_threshold(z, alpha / setup.scale)
    return Q.project(z)


def _dual_lipschitz(setup: ProxSetup, G: Matrix, alpha: float) -> float:
    if setup.is_entropy:
        column = float(np.max(np.linalg.norm(G, axis=0)))
        return alpha * alpha * column * column
    spectral = float(np.linalg.norm(G, 2))
    return alpha * alpha * spectral * spectral / setup.scale


def minimax_prox_step(
    setup: ProxSetup,
    Q: FeasibleSet,
    u: Vector,
    model: LinearModel,
    alpha: float,
    h: Optional[AnyComposite] = None,
    max_iter: Optional[int] = None,
    gap_tol: Optional[float] = None,
) -> Vector:
    """
    argmin over Q of V(x, u) + alpha * (max_j l_j(x) + h(x))

    The dual  max_{lambda in simplex} min_x V(x,u) + alpha*(sum_j lambda_j l_j(x) + h(x))
    is concave with gradient alpha * l(x(lambda)), and x(lambda) is a plain
    prox_step with g = G^T lambda. The duality gap at lambda is
    alpha * (max_j l_j(x) - lambda . l(x)).

    Raises:
        SubproblemError: gap above tolerance after max_iter ascent steps
    """
    if not alpha > 0:
        raise ArgumentError(f"alpha must be positive, got {alpha!r}")
    if model.count == 1:
        return prox_step(setup, Q, u, model.gradients[0], alpha, h)

    max_iter = settings.minimax_max_iter if max_iter is None else max_iter
    gap_tol = settings.minimax_gap_tol if gap_tol is None else gap_tol
    h = as_composite(h)
    check_supported(setup, Q, h)

    G = model.gradients
    b = model.offsets
    M = model.count

    def primal(lam: Vector) -> tuple[Vector, Vector]:
        x = prox_step(setup, Q, u, G.T @ lam, alpha, h)
        return x, b + G @ x

    def gap_of(lam: Vector, ell: Vector) -> float:
        return alpha * (float(np.max(ell)) - float(lam @ ell))

    def tolerance(x: Vector, ell: Vector) -> float:
        objective = bregman(setup, x, u) + alpha * (float(np.max(ell)) + h.value(x))
        return gap_tol * (1.0 + abs(objective))

    lip = _dual_lipschitz(setup, G, alpha)
    if lip == 0.0:
        # all gradients vanish: x does not depend on lambda
        x, ell = primal(np.full(M, 1.0 / M))
        return x

    lam = np.full(M, 1.0 / M)
    z = lam.copy()
    t = 1.0
    best_x, best_gap = None, np.inf
    for iteration in range(max_iter):
        _, ell_z = primal(z)
        grad = alpha * ell_z
        lam_next = project_simplex(z + grad / lip)
        x, ell = primal(lam_next)
        gap = gap_of(lam_next, ell)
        if gap < best_gap:
            best_x, best_gap = x, gap
        if gap <= tolerance(x, ell):
            return x

        # adaptive restart when momentum points downhill
        if float(grad @ (lam_next - lam)) < 0.0:
            t = 1.0
            z = lam_next
        else:
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            z = lam_next + ((t - 1.0) / t_next) * (lam_next - lam)
            t = t_next
        lam = lam_next

    logger.warning(f"minimax subproblem stopped at gap {best_gap:.3e} after {max_iter} iterations")
    raise SubproblemError(
        f"dual ascent did not reach gap {gap_tol:g} within {max_iter} iterations",
        best=best_x,
        residual=float(best_gap),
    )


def three_point_gap(
    setup: ProxSetup,
    psi: Callable[[Vector], float],
    x: Vector,
    y: Vector,
    z: Vector,
) -> float:
    """
    psi(x) + V(x, z) - psi(y) - V(y, z) - V(x, y)

    Nonnegative for every x in Q when y = argmin_Q psi + V(., z).
    """
    return (
        psi(x) + bregman(setup, x, z)
        - psi(y) - bregman(setup, y, z)
        - bregman(setup, x, y)
    )

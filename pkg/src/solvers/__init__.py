"""
Mirror Triangles Method variants
"""

from src.solvers.base import AdaptiveSolver, BaseSolver, combine
from src.solvers.directional import (
    DirectionalPlan,
    P0Budget,
    p0_budget,
    plan_directional,
    run_directional,
    run_zeroth_order,
)
from src.solvers.inexact import InexactMode, check_descent_inexact, run_inexact
from src.solvers.minimax import check_descent, reformulate_constrained, run_adaptive_minimax
from src.solvers.mtm_base import run_base
from src.solvers.schedule import (
    DirectionalSchedule,
    StepSchedule,
    directional_schedule,
    gamma_weights,
    next_alpha,
    solve_alpha_adaptive,
)
from src.solvers.stochastic import (
    StochasticPlan,
    batch_size,
    delta_admissible,
    plan,
    run_stochastic,
    total_draws_bound,
)

__all__ = [
    "AdaptiveSolver",
    "BaseSolver",
    "combine",
    "DirectionalPlan",
    "P0Budget",
    "p0_budget",
    "plan_directional",
    "run_directional",
    "run_zeroth_order",
    "InexactMode",
    "check_descent_inexact",
    "run_inexact",
    "check_descent",
    "reformulate_constrained",
    "run_adaptive_minimax",
    "run_base",
    "DirectionalSchedule",
    "StepSchedule",
    "directional_schedule",
    "gamma_weights",
    "next_alpha",
    "solve_alpha_adaptive",
    "StochasticPlan",
    "batch_size",
    "delta_admissible",
    "plan",
    "run_stochastic",
    "total_draws_bound",
]

"""
Test-problem suite with analytic optima and certified Lipschitz constants
"""

from src.problems.base import MinimaxProblem, Problem
from src.problems.functions import (
    AffineFunction,
    LogSumExpFunction,
    Objective,
    QuadraticFunction,
    ShiftedFunction,
)
from src.problems.logsumexp import LogSumExpProblem
from src.problems.max_quadratics import MaxOfQuadratics
from src.problems.quadratic import QuadraticProblem
from src.problems.registry import (
    SUITE,
    get_problem,
    list_problems,
    reference_optimum,
    stationarity_residual,
)

__all__ = [
    "MinimaxProblem",
    "Problem",
    "AffineFunction",
    "LogSumExpFunction",
    "Objective",
    "QuadraticFunction",
    "ShiftedFunction",
    "LogSumExpProblem",
    "MaxOfQuadratics",
    "QuadraticProblem",
    "SUITE",
    "get_problem",
    "list_problems",
    "reference_optimum",
    "stationarity_residual",
]

"""
Prox-function machinery and Bregman-proximal subproblems
"""

from src.prox.composite import AffineComposite, L1Composite, ZeroComposite, as_composite
from src.prox.feasible import FeasibleSet, SetKind, project_simplex
from src.prox.geometry import ProxKind, ProxSetup, bregman
from src.prox.subproblems import (
    LinearModel,
    check_supported,
    minimax_prox_step,
    prox_step,
    three_point_gap,
)

__all__ = [
    "AffineComposite",
    "L1Composite",
    "ZeroComposite",
    "as_composite",
    "FeasibleSet",
    "SetKind",
    "project_simplex",
    "ProxKind",
    "ProxSetup",
    "bregman",
    "LinearModel",
    "check_supported",
    "minimax_prox_step",
    "prox_step",
    "three_point_gap",
]

"""
Simulated oracles: exact, (delta, L), stochastic mini-batch, directional
"""

from src.oracles.directional import (
    DirectionScheme,
    SchemeKind,
    directional_eval,
    finite_diff_eval,
    finite_diff_noise_bound,
    sample_direction,
    zeroth_order_step,
)
from src.oracles.exact import exact_eval
from src.oracles.inexact import DeltaLOracle, PerturbationMode, delta_eval
from src.oracles.rng import substream
from src.oracles.stochastic import StochasticOracle, mini_batch_eval, stochastic_eval

__all__ = [
    "DirectionScheme",
    "SchemeKind",
    "directional_eval",
    "finite_diff_eval",
    "finite_diff_noise_bound",
    "sample_direction",
    "zeroth_order_step",
    "exact_eval",
    "DeltaLOracle",
    "PerturbationMode",
    "delta_eval",
    "substream",
    "StochasticOracle",
    "mini_batch_eval",
    "stochastic_eval",
]

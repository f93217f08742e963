from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

Vector: TypeAlias = NDArray[np.float64]
Matrix: TypeAlias = NDArray[np.float64]


def as_vector(x) -> Vector:
    """Float64 1-D copy of x."""
    return np.array(x, dtype=np.float64, copy=True).reshape(-1)

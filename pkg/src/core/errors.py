"""
Exception hierarchy for mtm-bench
"""

from typing import Any, Optional


class MTMError(Exception):
    """Base class for every error raised by the library"""


class ArgumentError(MTMError, ValueError):
    """A scalar or structural argument is outside its admissible range"""


class DomainError(MTMError, ValueError):
    """A point lies outside the domain of the prox-function"""


class CapabilityError(MTMError):
    """The requested combination is not implemented"""

    def __init__(self, message: str, supported: Optional[list[str]] = None):
        self.supported = list(supported or [])
        if self.supported:
            message = f"{message}; supported: {', '.join(self.supported)}"
        super().__init__(message)


class SubproblemError(MTMError):
    """The inner prox subproblem solver stopped before reaching tolerance"""

    def __init__(
        self,
        message: str,
        best: Any = None,
        residual: float = float("nan"),
        iteration: Optional[int] = None,
    ):
        self.best = best
        self.residual = residual
        self.iteration = iteration
        super().__init__(message)

    def at_iteration(self, iteration: int) -> "SubproblemError":
        """Copy of this error tagged with the outer solver step"""
        return SubproblemError(
            f"step {iteration}: {self.args[0]}",
            best=self.best,
            residual=self.residual,
            iteration=iteration,
        )


class DivergenceError(MTMError):
    """Backtracking pushed the local constant past the guard"""

    def __init__(self, message: str, iteration: int, L: float):
        self.iteration = iteration
        self.L = L
        super().__init__(message)


class ContractViolation(MTMError, ValueError):
    """An oracle input breaks its declared noise bound"""


class PreconditionError(MTMError):
    """A solver precondition does not hold"""

    def __init__(self, message: str, admissible: Optional[float] = None):
        self.admissible = admissible
        if admissible is not None:
            message = f"{message} (admissible maximum: {admissible!r})"
        super().__init__(message)


class ConfigError(MTMError):
    """An experiment configuration is invalid"""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)

    def to_record(self) -> dict:
        """Machine-readable error record"""
        return {"error": self.code, "message": str(self.args[0])}

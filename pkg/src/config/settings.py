"""
Settings and configuration management for mtm-bench
"""

from pathlib import Path
from typing import Literal
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Logging
    debug: bool = Field(False, alias="MTM_DEBUG")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        "INFO",
        alias="MTM_LOG_LEVEL"
    )
    log_to_file: bool = Field(False, alias="MTM_LOG_TO_FILE")
    log_dir: Path = Field(Path("logs"), alias="MTM_LOG_DIR")
    log_retention_days: int = Field(30, alias="MTM_LOG_RETENTION_DAYS", ge=1, le=365)

    # Numerical tolerances
    descent_tolerance: float = Field(1e-12, alias="MTM_DESCENT_TOLERANCE", ge=0.0)
    divergence_guard_exponent: int = Field(
        60,
        alias="MTM_DIVERGENCE_GUARD_EXPONENT",
        ge=1,
        le=1000
    )
    minimax_max_iter: int = Field(10_000, alias="MTM_MINIMAX_MAX_ITER", ge=1)
    minimax_gap_tol: float = Field(1e-10, alias="MTM_MINIMAX_GAP_TOL", gt=0.0)
    entropy_floor: float = Field(1e-300, alias="MTM_ENTROPY_FLOOR", gt=0.0)
    bound_tolerance: float = Field(1e-9, alias="MTM_BOUND_TOLERANCE", ge=0.0)

    # Execution
    execution: Literal["sequential", "parallel"] = Field(
        "sequential",
        alias="MTM_EXECUTION"
    )
    max_workers: int = Field(4, alias="MTM_MAX_WORKERS", ge=1, le=256)
    output_dir: Path = Field(Path("runs"), alias="MTM_OUTPUT_DIR")
    trace_format: Literal["csv", "json"] = Field("csv", alias="MTM_TRACE_FORMAT")

    # Statistics
    confidence_z: float = Field(1.96, alias="MTM_CONFIDENCE_Z", gt=0.0)

    @field_validator("output_dir", "log_dir", mode="before")
    @classmethod
    def ensure_path(cls, v):
        """Coerce strings to paths"""
        if isinstance(v, str):
            v = Path(v)
        return v

    @property
    def divergence_factor(self) -> float:
        """Backtracking guard: L_k may not exceed this multiple of L_0"""
        return float(2 ** self.divergence_guard_exponent)

    @property
    def parallel(self) -> bool:
        """Whether seed batches fan out to a worker pool"""
        return self.execution == "parallel" and self.max_workers > 1


# Global settings instance
settings = Settings()

"""
Experiment configuration: INI file with flat sections, validated by pydantic

    [experiment]
    solver = stochastic
    problem = quad_box
    prox = euclidean
    seeds = 0-199

    [oracle]
    delta = 0
    D = 1e-4

    [plan]
    epsilon = 0.01
    beta = 0.05

    [output]
    out = runs/stochastic
    format = csv
"""

import configparser
import re
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from src.config.settings import settings
from src.core.errors import ConfigError
from src.oracles.directional import SchemeKind
from src.oracles.inexact import PerturbationMode
from src.problems.registry import SUITE
from src.prox.geometry import ProxKind

SOLVERS = {
    "base": "fixed-L method, rate 4LR^2/(k+1)^2",
    "minimax": "adaptive method for max_j f_j + h, rate 8LR^2/(k+1)^2",
    "inexact": "adaptive method on a (delta, L)-oracle, rate 8LR^2/(k+1)^2 + 2k delta",
    "stochastic": "mini-batched stochastic oracle, F(x_N) - F* <= 4 eps w.p. 1 - 3 beta",
    "directional": "random directional derivatives on R^n, E gap <= 3 eps",
    "zeroth_order": "directional method on noisy forward differences",
}

SECTIONS = {
    "experiment": ("solver", "problem", "prox", "seeds"),
    "oracle": ("delta", "perturbation", "D", "scheme"),
    "plan": ("N", "epsilon", "beta", "L0", "D_Q", "P0", "mode", "allow_unverified_geometry"),
    "output": ("out", "format"),
}


def parse_seeds(text: Any) -> list[int]:
    """'0-199', '1,5,9' or a single integer."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [int(s) for s in text]
    seeds: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        span = re.fullmatch(r"(\d+)\s*-\s*(\d+)", part)
        if span:
            seeds.extend(range(int(span.group(1)), int(span.group(2)) + 1))
        else:
            seeds.append(int(part))
    return seeds


class ExperimentConfig(BaseModel):
    solver: str
    problem: str
    prox: Optional[str] = None
    seeds: list[int] = Field(default_factory=lambda: [0])

    delta: float = Field(0.0, ge=0.0)
    perturbation: PerturbationMode = PerturbationMode.CONSTANT
    D: float = Field(0.0, ge=0.0)
    scheme: SchemeKind = SchemeKind.UNIFORM_SPHERE

    N: Optional[int] = Field(None, ge=0)
    epsilon: Optional[float] = Field(None, gt=0.0)
    beta: float = Field(0.05, gt=0.0, lt=1.0)
    L0: Optional[float] = Field(None, gt=0.0)
    D_Q: Optional[float] = Field(None, gt=0.0)
    P0: Optional[float] = Field(None, gt=0.0)
    mode: Literal["fixed_delta", "universal"] = "fixed_delta"
    allow_unverified_geometry: bool = False

    out: Path = Field(default_factory=lambda: settings.output_dir)
    format: Literal["csv", "json"] = Field(default_factory=lambda: settings.trace_format)

    @field_validator("seeds", mode="before")
    @classmethod
    def split_seeds(cls, v):
        seeds = parse_seeds(v)
        if not seeds:
            raise ValueError("at least one seed is required")
        return seeds

    @property
    def prox_name(self) -> str:
        return self.prox or SUITE[self.problem].default_prox

    def check(self) -> "ExperimentConfig":
        """
        Raises:
            ConfigError: unknown ids or a missing run length
        """
        if self.solver not in SOLVERS:
            raise ConfigError(
                "CONFIG_UNKNOWN_SOLVER",
                f"unknown solver {self.solver!r}; known: {', '.join(SOLVERS)}",
            )
        if self.problem not in SUITE:
            raise ConfigError(
                "CONFIG_UNKNOWN_PROBLEM",
                f"unknown problem {self.problem!r}; known: {', '.join(sorted(SUITE))}",
            )
        if self.prox is not None and self.prox not in {k.value for k in ProxKind}:
            raise ConfigError("CONFIG_UNKNOWN_PROX", f"unknown prox setup {self.prox!r}")
        if self.solver in ("base", "minimax", "inexact") and self.N is None:
            raise ConfigError("CONFIG_MISSING_FIELD", f"solver {self.solver!r} needs plan.N")
        if self.solver in ("stochastic", "directional", "zeroth_order") and self.epsilon is None:
            raise ConfigError("CONFIG_MISSING_FIELD", f"solver {self.solver!r} needs plan.epsilon")
        return self

    def echo(self) -> dict:
        """JSON-ready copy for trace headers."""
        data = self.model_dump(mode="json")
        data["prox"] = self.prox_name
        return data


def flatten_sections(sections: dict[str, dict[str, Any]]) -> dict[str, Any]:
    """
    Raises:
        ConfigError: unknown section or key
    """
    flat: dict[str, Any] = {}
    for section, values in sections.items():
        if section not in SECTIONS:
            raise ConfigError("CONFIG_UNKNOWN_KEY", f"unknown section [{section}]")
        for key, value in values.items():
            if key not in SECTIONS[section]:
                raise ConfigError("CONFIG_UNKNOWN_KEY", f"unknown key {section}.{key}")
            flat[key] = value
    return flat


def config_from_sections(sections: dict[str, dict[str, Any]]) -> ExperimentConfig:
    """
    Raises:
        ConfigError: invalid values or ids
    """
    try:
        config = ExperimentConfig(**flatten_sections(sections))
    except ValidationError as error:
        first = error.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ConfigError("CONFIG_INVALID", f"{where}: {first['msg']}") from error
    return config.check()


def read_sections(path: Path) -> dict[str, dict[str, Any]]:
    """
    Raises:
        ConfigError: missing or unparsable file
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError("CONFIG_NOT_FOUND", f"config file {path} does not exist")
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as error:
        raise ConfigError("CONFIG_PARSE", str(error)) from error
    return {name: dict(parser[name]) for name in parser.sections()}


def load_config(path: Path) -> ExperimentConfig:
    return config_from_sections(read_sections(path))


def override(sections: dict[str, dict[str, Any]], dotted: str, value: Any) -> dict[str, dict[str, Any]]:
    """Copy of `sections` with `section.key` set to `value`."""
    if "." not in dotted:
        raise ConfigError("CONFIG_UNKNOWN_KEY", f"expected section.key, got {dotted!r}")
    section, key = dotted.split(".", 1)
    updated = {name: dict(values) for name, values in sections.items()}
    updated.setdefault(section, {})[key] = value
    return updated

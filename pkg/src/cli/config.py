"""
Session Configuration
=====================

Dataclass configuration for one workbench invocation: the base field, the
algebra family with its parameters, and the run settings (seed, workers,
output format). Defaults can be overridden from the environment:

    WORKBENCH_WORKERS   default worker count
    WORKBENCH_SEED      default seed
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FAMILIES = ("witt", "zassenhaus-envelope", "sl2-semidirect")
FORMATS = ("text", "json")
# commands whose coordinates live over F_p; M only reaches construct and verify
PRIME_FIELD_COMMANDS = ("count", "reduce", "sample")
SCHEMA_VERSION = 1

# operator tests allowed in enumerate mode
ENUMERATION_GUARD = 10**7


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={value!r}")
        return default


@dataclass
class FieldConfig:
    """The base field F_{p^M}."""

    p: int = 5
    M: Optional[int] = None

    def __post_init__(self):
        if self.M is None:
            self.M = 1


@dataclass
class AlgebraConfig:
    """
    Family and parameters.

    ``m`` is the number of variables of W(m;n); ``heights`` the tuple n for
    the witt family. ``n`` is the height of W(1;n) for the zassenhaus family.
    ``t`` is the leading tail order used by the Tyurin reduction.
    """

    family: str = "witt"
    m: int = 1
    n: int = 1
    heights: Optional[Tuple[int, ...]] = None
    t: Optional[int] = None

    def __post_init__(self):
        if self.heights is None:
            self.heights = (1,) * self.m
        self.heights = tuple(int(h) for h in self.heights)


@dataclass
class RunConfig:
    seed: Optional[int] = None
    workers: Optional[int] = None
    output_format: str = "text"
    mode: str = "enumerate"
    samples: int = 100
    suite: str = "all"
    retry_budget: int = 200

    def __post_init__(self):
        if self.seed is None:
            self.seed = _env_int("WORKBENCH_SEED", 0)
        if self.workers is None:
            self.workers = _env_int("WORKBENCH_WORKERS", 1)


@dataclass
class SessionConfig:
    """Complete configuration of one command."""

    field: FieldConfig = None
    algebra: AlgebraConfig = None
    run: RunConfig = None

    def __post_init__(self):
        if self.field is None:
            self.field = FieldConfig()
        if self.algebra is None:
            self.algebra = AlgebraConfig()
        if self.run is None:
            self.run = RunConfig()

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def M(self) -> int:
        return self.field.M

    @property
    def family(self) -> str:
        return self.algebra.family

    def problems(self) -> List[str]:
        """Every constraint the configuration violates."""
        issues = []
        p, family = self.field.p, self.algebra.family
        if family not in FAMILIES:
            issues.append(f"unknown family {family!r}; choose one of {', '.join(FAMILIES)}")
        if self.run.output_format not in FORMATS:
            issues.append(f"unknown format {self.run.output_format!r}")
        if self.run.workers < 1:
            issues.append(f"worker count must be >= 1, got {self.run.workers}")
        if self.run.seed < 0 or self.run.seed >= 2**64:
            issues.append(f"seed must fit in 64 bits, got {self.run.seed}")
        if self.field.M < 1:
            issues.append(f"extension degree must be >= 1, got {self.field.M}")
        if family in ("witt", "sl2-semidirect") and p <= 2:
            issues.append(f"{family} needs p > 2, got p = {p}")
        if family == "witt":
            if self.algebra.m < 1 or len(self.algebra.heights) != self.algebra.m:
                issues.append(f"witt needs m >= 1 heights, got m = {self.algebra.m}, n = {self.algebra.heights}")
            if any(h < 1 for h in self.algebra.heights):
                issues.append(f"heights must be >= 1, got {self.algebra.heights}")
        if family == "zassenhaus-envelope":
            if p <= 3:
                issues.append(f"zassenhaus-envelope needs p > 3, got p = {p}")
            if self.algebra.n < 2:
                issues.append(f"W(1;n) needs n >= 2, got n = {self.algebra.n}")
            if self.algebra.t is not None and not 1 <= self.algebra.t <= self.algebra.n - 1:
                issues.append(f"t must lie in 1..{self.algebra.n - 1}, got {self.algebra.t}")
        if family != "zassenhaus-envelope" and self.field.M != 1:
            issues.append(f"{family} is built over the prime field; M must be 1, got M = {self.field.M}")
        return issues

    def command_problems(self, command: str) -> List[str]:
        """Constraints a single command adds on top of ``problems()``."""
        if command in PRIME_FIELD_COMMANDS and self.field.M != 1:
            return [f"{command} works over F_{self.field.p}; M = {self.field.M} is only used by construct and verify"]
        return []

    def validate(self, command: Optional[str] = None) -> "SessionConfig":
        """Raise ValueError listing every violated constraint."""
        issues = self.problems() + (self.command_problems(command) if command else [])
        if issues:
            logger.error(f"Invalid session configuration: {'; '.join(issues)}")
            raise ValueError("; ".join(issues))
        return self

    def e_algebra_degree(self) -> int:
        """Extension degree used by the e_alpha presentation: M when n | M, else n."""
        n = max(self.algebra.n, 2)
        return self.field.M if self.field.M >= n and self.field.M % n == 0 else n

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.field.p,
            "M": self.field.M,
            "family": self.algebra.family,
            "m": self.algebra.m,
            "n": list(self.algebra.heights) if self.algebra.family == "witt" else self.algebra.n,
            "t": self.algebra.t,
            "seed": self.run.seed,
            "workers": self.run.workers,
        }


# Default configuration instance
DEFAULT_CONFIG = SessionConfig()


def get_config() -> SessionConfig:
    """Get the default configuration."""
    return DEFAULT_CONFIG


def update_config(config: SessionConfig, **kwargs) -> SessionConfig:
    """Update configuration with new values; keys are looked up in field, algebra and run."""
    for key, value in kwargs.items():
        for section in (config.field, config.algebra, config.run):
            if hasattr(section, key):
                setattr(section, key, value)
                break
        else:
            logger.warning(f"Unknown config key: {key}")
    return config


def build_config(p: int = 5, M: Optional[int] = None, family: str = "witt", m: int = 1, n=None,
                 t: Optional[int] = None, seed: Optional[int] = None, workers: Optional[int] = None,
                 output_format: str = "text", **run_options) -> SessionConfig:
    """
    Configuration from CLI-style values.

    ``n`` is a height tuple (or a single height) for witt and the height of
    W(1;n) for zassenhaus-envelope; it is ignored for sl2-semidirect.
    """
    if isinstance(n, int):
        n = (n,)
    heights = tuple(n) if n else None
    if family == "witt":
        if heights is not None and len(heights) == 1 and m > 1:
            heights = heights * m
        if heights is not None:
            m = len(heights)
        algebra = AlgebraConfig(family, m=m, heights=heights, t=t)
    elif family == "zassenhaus-envelope":
        height = heights[0] if heights else 2
        algebra = AlgebraConfig(family, m=1, n=height, heights=(height,), t=t)
    else:
        algebra = AlgebraConfig(family, m=1, t=t)
    run = RunConfig(seed=seed, workers=workers, output_format=output_format, **run_options)
    return SessionConfig(FieldConfig(p, M), algebra, run)

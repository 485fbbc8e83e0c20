"""
Command-line driver: session configuration, algebra families, nilpotent point
counting, constrained sampling, reductions and the verification ledger.
"""

from .config import (
    DEFAULT_CONFIG,
    ENUMERATION_GUARD,
    FAMILIES,
    SCHEMA_VERSION,
    AlgebraConfig,
    FieldConfig,
    RunConfig,
    SessionConfig,
    build_config,
    get_config,
    update_config,
)
from .counting import MODES, CountReport, GuardExceededError, count_nilpotent
from .families import CONSTRAINTS, AlgebraFamily, EnvelopeFamily, SemidirectFamily, WittFamily, build_algebra
from .main import COMMANDS, WorkbenchCLI, build_parser, main, render
from .reduce import REDUCTION_FAMILIES, replay_chain, run_reduction
from .sampling import Sample, SamplingBudgetError, sample_elements
from .verify import CHECKS, SUITES, ledger_passed, run_verification

__all__ = [
    "DEFAULT_CONFIG",
    "ENUMERATION_GUARD",
    "FAMILIES",
    "SCHEMA_VERSION",
    "AlgebraConfig",
    "FieldConfig",
    "RunConfig",
    "SessionConfig",
    "build_config",
    "get_config",
    "update_config",
    "MODES",
    "CountReport",
    "GuardExceededError",
    "count_nilpotent",
    "CONSTRAINTS",
    "AlgebraFamily",
    "EnvelopeFamily",
    "SemidirectFamily",
    "WittFamily",
    "build_algebra",
    "COMMANDS",
    "WorkbenchCLI",
    "build_parser",
    "main",
    "render",
    "REDUCTION_FAMILIES",
    "replay_chain",
    "run_reduction",
    "Sample",
    "SamplingBudgetError",
    "sample_elements",
    "CHECKS",
    "SUITES",
    "ledger_passed",
    "run_verification",
]

"""
Utility modules for the Cartan workbench: logging, exact linear algebra over
finite fields and seeded random streams.
"""

from .logging_config import setup_logging, get_logger, setup_environment_logging
from .linalg import (
    NotInSpanError,
    EchelonBasis,
    SpanDecomposer,
    matrix_power,
    frobenius_power,
    is_nilpotent_matrix,
    stack_rows,
)
from .rng import substream, substreams

logger = get_logger(__name__)

__all__ = [
    "setup_logging",
    "get_logger",
    "setup_environment_logging",
    "NotInSpanError",
    "EchelonBasis",
    "SpanDecomposer",
    "matrix_power",
    "frobenius_power",
    "is_nilpotent_matrix",
    "stack_rows",
    "substream",
    "substreams",
]

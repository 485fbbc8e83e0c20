"""Exceptions raised by automorphism construction and the reductions."""

from typing import Any, Optional


class InvalidAutomorphismError(ValueError):
    """Images or coefficients do not define an automorphism."""


class PreconditionError(ValueError):
    """
    An input fails the hypothesis of an operation.

    ``witness`` carries the computed object showing the failure, e.g. a
    nonzero p-th power or a derivation landing in W_(0).
    """

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class ReductionError(RuntimeError):
    """A reduction finished without reaching the form it claims."""

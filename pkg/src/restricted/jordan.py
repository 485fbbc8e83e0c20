"""
Additive Jordan-Chevalley decomposition.

The semisimple part of an operator A is obtained by Newton iteration on the
squarefree radical P of its characteristic polynomial,
S <- S - P(S) P'(S)^{-1}, starting from S = A; then both parts are decomposed
back into the algebra.
"""

from typing import Tuple

import galois
import numpy as np

from src.restricted.realization import commutator, realization_for
from src.utils.linalg import NotInSpanError, is_zero
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def squarefree_radical(poly: galois.Poly) -> galois.Poly:
    """Product of the distinct monic irreducible factors."""
    if poly.degree == 0:
        return poly
    factors, _ = poly.factors()
    radical = galois.Poly.One(poly.field)
    for factor in factors:
        radical = radical * factor
    return radical


def semisimple_part(matrix: galois.FieldArray) -> galois.FieldArray:
    radical = squarefree_radical(matrix.characteristic_poly())
    derivative = radical.derivative()
    current = matrix
    for step in range(matrix.shape[0] + 1):
        value = radical(current, elementwise=False)
        if is_zero(value):
            logger.debug(f"Semisimple part converged after {step} Newton steps")
            return current
        current = current - value @ np.linalg.inv(derivative(current, elementwise=False))
    raise ArithmeticError("Newton iteration for the semisimple part did not converge")


def jordan_chevalley(x) -> Tuple[object, object]:
    """(x_s, x_n) with x = x_s + x_n, [x_s, x_n] = 0, x_n nilpotent and x_s semisimple."""
    realization = realization_for(x)
    op = realization.operator(x)
    semisimple = semisimple_part(op)
    nilpotent = op - semisimple
    if not is_zero(commutator(semisimple, nilpotent)):
        raise ArithmeticError("Jordan parts do not commute")
    try:
        return realization.decompose(semisimple), realization.decompose(nilpotent)
    except NotInSpanError:
        logger.error("Jordan part escaped the algebra; the realization is not restricted")
        raise

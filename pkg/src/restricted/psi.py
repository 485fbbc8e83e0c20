"""
psi-Relations
=============

For an algebra with constants (e, s), every x satisfies
x^[p]^{e+s} = sum_{i<s} psi_i(x) x^[p]^{e+i}. ``psi_relation`` solves this
linear system for one element; the nilpotent elements are exactly the common
zeros of the psi_i.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.restricted.realization import realization_for
from src.utils.linalg import NotInSpanError, SpanDecomposer, as_ints, matrix_power, stack_rows
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class PsiRelationError(ValueError):
    """(e, s) inconsistent with the algebra's constants."""


@dataclass(frozen=True)
class PsiCoefficients:
    """
    psi_0(x), ..., psi_{s-1}(x) as integer field encodings.

    ``psi`` is None when no relation of the expected length exists;
    ``observed_length`` is the least k with x^[p]^{e+k} in the span of the
    earlier powers.
    """

    e: int
    s: int
    psi: Optional[Tuple[int, ...]]
    observed_length: int

    @property
    def solved(self) -> bool:
        return self.psi is not None

    def vanishes(self) -> bool:
        return self.solved and not any(self.psi)


def _resolve_constants(x, e: Optional[int], s: Optional[int]) -> Tuple[int, int]:
    realization = realization_for(x)
    table = realization.constants()
    if table is None:
        if e is None or s is None:
            raise PsiRelationError(f"No (e, s) known for {realization.family}; pass both explicitly")
        return e, s
    known_e, known_s = table
    if s is not None and s != known_s:
        logger.error(f"s = {s} given for {realization.family}, expected {known_s}")
        raise PsiRelationError(f"s = {s} inconsistent with MT = {known_s} for {realization.family}")
    if e is not None and known_e is not None and e != known_e:
        logger.error(f"e = {e} given for {realization.family}, expected {known_e}")
        raise PsiRelationError(f"e = {e} inconsistent with e = {known_e} for {realization.family}")
    if e is None and known_e is None:
        raise PsiRelationError(f"e is not known for {realization.family}; pass it explicitly")
    return (known_e if e is None else e), known_s


def psi_relation(x, e: Optional[int] = None, s: Optional[int] = None) -> PsiCoefficients:
    e, s = _resolve_constants(x, e, s)
    realization = realization_for(x)
    field = realization.field
    p = field.characteristic
    op = realization.operator(x)
    for _ in range(e):
        op = matrix_power(op, p)
    powers = [op]
    for _ in range(s):
        powers.append(matrix_power(powers[-1], p))
    size = op.shape[0] ** 2
    flat = [power.reshape(-1) for power in powers]

    observed = s + 1
    for k in range(s + 1):
        earlier = SpanDecomposer(stack_rows(field, flat[:k], size)) if k else None
        if earlier is None:
            if not np.any(as_ints(flat[0])):
                observed = 0
                break
        elif earlier.contains(flat[k]):
            observed = k
            break

    decomposer = SpanDecomposer(stack_rows(field, flat[:s], size))
    try:
        coords = decomposer.coordinates(flat[s])
    except NotInSpanError:
        logger.info(f"No psi-relation of length {s} (observed {observed}) for e = {e}")
        return PsiCoefficients(e, s, None, observed)
    psi = tuple(int(c) for c in as_ints(coords))
    logger.debug(f"psi = {psi} (e = {e}, s = {s}, observed {observed})")
    return PsiCoefficients(e, s, psi, observed)

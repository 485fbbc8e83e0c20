"""
p-Subalgebra Closure
====================

The smallest subspace of operators containing the generators that is closed
under commutators and p-th powers, grown by a work queue over an echelon basis
of flattened matrices. Each new basis element is bracketed with every earlier
one and its p-th power is queued, so an empty queue is a fixed point.
"""

from collections import deque
from typing import Iterable, List, Optional, Tuple

import galois

from src.restricted.realization import OperatorSpanAlgebra, commutator, realization_for
from src.utils.linalg import EchelonBasis, matrix_power
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _operators_of(generators: Iterable) -> Tuple[List[galois.FieldArray], str]:
    operators, tag = [], "operators"
    for g in generators:
        if isinstance(g, galois.FieldArray):
            operators.append(g)
        else:
            realization = realization_for(g)
            operators.append(realization.operator(g))
            tag = realization.basis_tag
    return operators, tag


def p_closure(generators: Iterable, basis_tag: Optional[str] = None, family: str = "p-closure",
              constants=None) -> OperatorSpanAlgebra:
    """
    p-subalgebra generated by elements (or raw operator matrices).

    Returns the closure as an ``OperatorSpanAlgebra`` whose ``operators`` are
    the basis found, in the order they entered the span.
    """
    operators, tag = _operators_of(generators)
    if not operators:
        raise ValueError("p_closure needs at least one generator")
    field = type(operators[0])
    p = field.characteristic
    size = operators[0].shape[0]
    span = EchelonBasis(field, size * size)
    basis: List[galois.FieldArray] = []
    queue = deque(operators)
    while queue:
        op = queue.popleft()
        if not span.add(op.reshape(-1)):
            continue
        for earlier in basis:
            queue.append(commutator(op, earlier))
        basis.append(op)
        queue.append(matrix_power(op, p))
        if len(basis) % 25 == 0:
            logger.debug(f"p-closure: rank {len(basis)}, queue {len(queue)}")
    if not basis:
        raise ValueError("Generators span the zero space")
    logger.info(f"p-closure: dimension {len(basis)} on a {size}-dimensional module")
    return OperatorSpanAlgebra(basis, basis_tag or tag, family=family, constants=constants)


def closure_check(algebra: OperatorSpanAlgebra) -> bool:
    """Re-verify bracket- and p-closure of a span."""
    p = algebra.field.characteristic
    ops = algebra.operators
    for i, a in enumerate(ops):
        if not algebra.contains(matrix_power(a, p)):
            return False
        for b in ops[:i]:
            if not algebra.contains(commutator(a, b)):
                return False
    return True

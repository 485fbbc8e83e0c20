"""
exp(ad u)
=========

For u whose operator U on the faithful module satisfies U^p = 0, the truncated
exponential E = sum_{i<p} U^i / i! is invertible with inverse
sum_{i<p} (-U)^i / i!, and x -> E X E^{-1} is an automorphism of every
restricted subalgebra it preserves. Conjugating operators instead of summing
(ad u)^i / i! keeps the terms of total order >= p that a truncated adjoint
series would drop.

When the module is O(m;n) itself, E must also be an algebra automorphism of
O(m;n): u = d on W(1;1) has U^p = 0, but E is the translation x -> x + 1 and
does not preserve the maximal ideal. Such u are rejected.
"""

from typing import Callable, Optional

import galois

from src.automorphisms.errors import PreconditionError
from src.divided_power import AlgebraShape, DPElement, multiplication_matrix
from src.restricted import OperatorMatrix, commutator, realization_for
from src.utils.linalg import as_ints, is_zero, matrix_power
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _truncated_exp(op: galois.FieldArray) -> galois.FieldArray:
    field = type(op)
    p = field.characteristic
    total = field.Identity(op.shape[0])
    term = field.Identity(op.shape[0])
    for i in range(1, p):
        term = (term @ op) * field(pow(i, -1, p))
        total = total + term
    return total


def _generators(shape: AlgebraShape):
    for i in range(shape.m):
        for j in range(shape.n[i]):
            yield DPElement.monomial(shape, tuple(shape.p**j if k == i else 0 for k in range(shape.m)))


def _multiplicativity_defect(E: galois.FieldArray, shape: AlgebraShape) -> Optional[galois.FieldArray]:
    """E M_g - M_{E(g)} E for the first generator x_i^(p^j) where it is nonzero, else None."""
    field = type(E)
    for g in _generators(shape):
        image = DPElement.from_dense(shape, as_ints(E @ field(g.dense() % shape.p)))
        defect = E @ field(multiplication_matrix(g)) - field(multiplication_matrix(image)) @ E
        if not is_zero(defect):
            logger.debug(f"exp(U) is not multiplicative on {g!r}")
            return defect
    return None


class ExpAdAutomorphism:
    """Conjugation by the truncated exponential of a nilpotent element."""

    def __init__(self, u):
        self.u = u
        self.realization = realization_for(u)
        op = self.realization.operator(u)
        p = self.realization.field.characteristic
        power = matrix_power(op, p)
        if not is_zero(power):
            logger.error("exp(ad u) rejected: operator of u has nonzero p-th power")
            raise PreconditionError(
                "exp(ad u) needs an element whose operator has vanishing p-th power",
                witness=OperatorMatrix(power, self.realization.basis_tag),
            )
        self.forward = _truncated_exp(op)
        self.backward = _truncated_exp(-op)
        shape = self.realization.module_shape()
        if shape is not None:
            defect = _multiplicativity_defect(self.forward, shape)
            if defect is not None:
                logger.error(f"exp(ad u) rejected: exp(u) is not an automorphism of {shape!r}")
                raise PreconditionError(
                    f"exp(u) is not an algebra automorphism of {shape!r}",
                    witness=OperatorMatrix(defect, self.realization.basis_tag),
                )

    def __call__(self, x):
        realization = realization_for(x)
        if realization is not self.realization:
            raise ValueError("exp(ad u) acts on the algebra containing u")
        return realization.decompose(self.forward @ realization.operator(x) @ self.backward)

    def inverse(self) -> "ExpAdAutomorphism":
        return ExpAdAutomorphism(self.u.scale(-1))

    def is_identity(self) -> bool:
        return is_zero(self.forward - type(self.forward).Identity(self.forward.shape[0]))


def exp_ad(u) -> ExpAdAutomorphism:
    """exp(ad u); raises PreconditionError carrying the nonzero p-th power otherwise."""
    return ExpAdAutomorphism(u)


def preserves_structure(automorphism: Callable, x, y) -> bool:
    """A([x, y]) == [A(x), A(y)] and A(x^[p]) == A(x)^[p], compared as operators."""
    realization = realization_for(x)
    p = realization.field.characteristic
    ax, ay = automorphism(x), automorphism(y)
    bracket_image = automorphism(realization.bracket(x, y))
    power_image = automorphism(realization.decompose(matrix_power(realization.operator(x), p)))
    target = realization_for(ax)
    ok_bracket = is_zero(target.operator(bracket_image) - commutator(target.operator(ax), target.operator(ay)))
    ok_power = is_zero(target.operator(power_image) - matrix_power(target.operator(ax), p))
    if not (ok_bracket and ok_power):
        logger.error(f"Automorphism check failed: bracket {ok_bracket}, p-th power {ok_power}")
    return ok_bracket and ok_power

"""
Witt Algebras
=============

W(m;n): the special derivations sum f_i d_i of O(m;n), with the bracket
[sum f_i d_i, sum g_j d_j] = sum_j (D(g_j) - E(f_j)) d_j, the natural action on
O(m;n), the standard filtration and grading, the divergence, and the faithful
operator matrices used by the restricted machinery.
"""

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.divided_power import (
    AlgebraShape,
    DPElement,
    ShapeMismatchError,
    ZeroElementError,
    dp_filtration_degree,
    dp_mul,
    dp_partial,
    monomials,
    multiplication_matrix,
    ordinary_monomial,
    partial_matrix,
)
from src.utils.linalg import NotInSpanError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class DerivationElement:
    """D = sum_i f_i d_i in W(m;n); ``coeffs[i]`` is the coefficient of d_{i+1}."""

    __slots__ = ("shape", "coeffs")

    def __init__(self, shape: AlgebraShape, coeffs: Optional[Sequence[DPElement]] = None):
        if coeffs is None:
            coeffs = [DPElement.zero(shape)] * shape.m
        coeffs = tuple(coeffs)
        if len(coeffs) != shape.m:
            raise ValueError(f"Expected {shape.m} coefficients, got {len(coeffs)}")
        for f in coeffs:
            if f.shape != shape:
                raise ShapeMismatchError(f"Coefficient shape {f.shape!r} differs from {shape!r}")
        self.shape = shape
        self.coeffs: Tuple[DPElement, ...] = coeffs

    @classmethod
    def zero(cls, shape: AlgebraShape) -> "DerivationElement":
        return cls(shape)

    @classmethod
    def partial(cls, shape: AlgebraShape, i: int, f: Optional[DPElement] = None) -> "DerivationElement":
        """f * d_{i+1} (f defaults to 1)."""
        coeffs = [DPElement.zero(shape)] * shape.m
        coeffs[i] = DPElement.one(shape) if f is None else f
        return cls(shape, coeffs)

    @classmethod
    def monomial(cls, shape: AlgebraShape, a, i: int, c: int = 1) -> "DerivationElement":
        """c * x^(a) d_{i+1}."""
        return cls.partial(shape, i, DPElement.monomial(shape, a, c))

    def __getitem__(self, i: int) -> DPElement:
        return self.coeffs[i]

    def _check(self, other: "DerivationElement"):
        if not isinstance(other, DerivationElement) or other.shape != self.shape:
            raise ShapeMismatchError(f"Shape mismatch: {self.shape!r} vs {getattr(other, 'shape', other)!r}")

    def __add__(self, other: "DerivationElement") -> "DerivationElement":
        self._check(other)
        return DerivationElement(self.shape, [f + g for f, g in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "DerivationElement") -> "DerivationElement":
        self._check(other)
        return DerivationElement(self.shape, [f - g for f, g in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "DerivationElement":
        return DerivationElement(self.shape, [-f for f in self.coeffs])

    def scale(self, c: int) -> "DerivationElement":
        return DerivationElement(self.shape, [f.scale(c) for f in self.coeffs])

    def __mul__(self, c: int) -> "DerivationElement":
        return self.scale(c)

    __rmul__ = __mul__

    def times(self, g: DPElement) -> "DerivationElement":
        """g * D, the O(m;n)-module structure."""
        return DerivationElement(self.shape, [dp_mul(g, f) for f in self.coeffs])

    def __call__(self, f: DPElement) -> DPElement:
        return witt_apply(self, f)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return isinstance(other, DerivationElement) and self.shape == other.shape and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.shape, self.coeffs))

    def dense(self) -> np.ndarray:
        """Coordinates in the basis x^(a) d_i, block i holding the coefficient of d_{i+1}."""
        return np.concatenate([f.dense() for f in self.coeffs])

    @classmethod
    def from_dense(cls, shape: AlgebraShape, vector: Iterable[int]) -> "DerivationElement":
        vector = np.asarray(vector, dtype=np.int64)
        dim = shape.dim
        return cls(shape, [DPElement.from_dense(shape, vector[i * dim : (i + 1) * dim]) for i in range(shape.m)])

    def serialize(self) -> str:
        return ";".join(f"∂{i + 1}={f.serialize()}" for i, f in enumerate(self.coeffs))

    @classmethod
    def parse(cls, text: str) -> "DerivationElement":
        blocks = [block for block in text.strip().split(";∂") if block]
        coeffs = []
        for position, block in enumerate(blocks):
            index, _, body = block.lstrip("∂").partition("=")
            if int(index) != position + 1:
                raise ValueError(f"Derivation blocks out of order at {block!r}")
            coeffs.append(DPElement.parse(body))
        if not coeffs:
            raise ValueError("Empty derivation text")
        return cls(coeffs[0].shape, coeffs)

    def __repr__(self):
        parts = [f"({f!r})*d{i + 1}" for i, f in enumerate(self.coeffs) if f]
        return " + ".join(parts) if parts else "0"


def _check_pair(D: DerivationElement, E):
    if D.shape != E.shape:
        raise ShapeMismatchError(f"Shape mismatch: {D.shape!r} vs {E.shape!r}")


def witt_apply(D: DerivationElement, f: DPElement) -> DPElement:
    """D(f) = sum_i f_i d_i(f)."""
    _check_pair(D, f)
    result = DPElement.zero(f.shape)
    for i, coeff in enumerate(D.coeffs):
        if coeff:
            result = result + dp_mul(coeff, dp_partial(f, i))
    return result


def witt_bracket(D: DerivationElement, E: DerivationElement) -> DerivationElement:
    _check_pair(D, E)
    return DerivationElement(D.shape, [witt_apply(D, g) - witt_apply(E, f) for f, g in zip(D.coeffs, E.coeffs)])


def derivation_filtration_degree(D: DerivationElement) -> int:
    """Largest l with D in W_(l), i.e. min filtration degree of the coefficients minus one."""
    if D.is_zero():
        raise ZeroElementError("The zero derivation has no filtration degree")
    return min(dp_filtration_degree(f) for f in D.coeffs if f) - 1


def homogeneous_degree(D: DerivationElement) -> Optional[int]:
    """Grading degree if every term x^(a) d_i has the same |a| - 1, else None."""
    degrees = {sum(a) - 1 for f in D.coeffs for a in f.terms}
    return degrees.pop() if len(degrees) == 1 else None


def in_filtration(D: DerivationElement, level: int) -> bool:
    return D.is_zero() or derivation_filtration_degree(D) >= level


def divergence(D: DerivationElement) -> DPElement:
    result = DPElement.zero(D.shape)
    for i, f in enumerate(D.coeffs):
        result = result + dp_partial(f, i)
    return result


def derivation_operator_matrix(D: DerivationElement) -> np.ndarray:
    """Integer matrix (mod p) of f -> D(f) on the monomial basis of O(m;n)."""
    shape = D.shape
    matrix = np.zeros((shape.dim, shape.dim), dtype=np.int64)
    for i, f in enumerate(D.coeffs):
        if f:
            matrix = (matrix + multiplication_matrix(f) @ partial_matrix(shape, i)) % shape.p
    return matrix


def derivation_from_operator(shape: AlgebraShape, matrix) -> DerivationElement:
    """
    Recover D from its operator: f_i is the image of x_i, then the candidate is
    checked against the whole matrix.
    """
    ints = np.asarray(matrix.view(np.ndarray) if hasattr(matrix, "view") else matrix, dtype=np.int64) % shape.p
    coeffs = []
    for i in range(shape.m):
        column = ints[:, shape.rank(shape.unit_vector(i))]
        coeffs.append(DPElement.from_dense(shape, column))
    candidate = DerivationElement(shape, coeffs)
    if not np.array_equal(derivation_operator_matrix(candidate), ints):
        raise NotInSpanError(f"Operator is not a special derivation of {shape!r}")
    return candidate


def witt_basis(shape: AlgebraShape) -> List[DerivationElement]:
    """x^(a) d_i in coordinate order."""
    return [DerivationElement.monomial(shape, a, i) for i in range(shape.m) for a in monomials(shape)]


def witt_dimension(shape: AlgebraShape) -> int:
    """dim W(m;n) = m p^{|n|}."""
    return shape.m * shape.dim


def regular_nilpotent_derivation(shape: AlgebraShape, start: int = 0, divided: bool = False) -> DerivationElement:
    """
    d_{k+1} + x_{k+1}^{p-1} d_{k+2} + ... + x_{k+1}^{p-1}...x_{m-1}^{p-1} d_m with k = start.

    Powers are ordinary unless ``divided`` is set, in which case x^(p-1) is used.
    """
    p = shape.p
    coeffs = [DPElement.zero(shape)] * shape.m
    for k in range(start, shape.m):
        exps = tuple(p - 1 if start <= j < k else 0 for j in range(shape.m))
        if divided:
            coeffs[k] = DPElement.monomial(shape, exps)
        else:
            coeffs[k] = ordinary_monomial(shape, exps)
    return DerivationElement(shape, coeffs)


def regular_power_formula(shape: AlgebraShape, l: int) -> DerivationElement:
    """Closed form of the p^l-th power of the regular nilpotent derivation: (-1)^l times the same pattern started at x_{l+1}."""
    if l >= shape.m:
        return DerivationElement.zero(shape)
    return regular_nilpotent_derivation(shape, start=l).scale((-1) ** l)

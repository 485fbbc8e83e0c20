"""
Faithful Realizations
=====================

Every restricted computation runs on matrices: an element is sent to its
operator on a faithful module, the matrix work is done with ``galois`` arrays
and the result is decomposed back into the algebra. A ``Realization`` knows
how to go both ways for one algebra; ``realization_for`` finds it from an
element by dispatching on the element type.

Other packages register their element types here (the p-envelope of the
Zassenhaus algebra, the semidirect products).
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache, singledispatch
from typing import List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.cartan_algebras import (
    DerivationElement,
    Sl2Element,
    derivation_from_operator,
    derivation_operator_matrix,
    sl2_bracket,
    witt_basis,
    witt_bracket,
)
from src.divided_power import AlgebraShape
from src.scalars import FieldSpec
from src.utils.linalg import NotInSpanError, SpanDecomposer, as_ints, field_scalar, stack_rows
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class UnregisteredAlgebraError(TypeError):
    """No faithful realization is known for this element type."""


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square matrix of an element acting on a fixed module basis."""

    entries: galois.FieldArray
    basis_tag: str

    def __post_init__(self):
        rows, cols = self.entries.shape
        if rows != cols:
            raise ValueError(f"Operator matrix must be square, got {self.entries.shape}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def field(self) -> type:
        return type(self.entries)

    def ints(self) -> np.ndarray:
        return as_ints(self.entries)

    def is_zero(self) -> bool:
        return not np.any(self.ints())

    def __eq__(self, other):
        return (
            isinstance(other, OperatorMatrix)
            and self.basis_tag == other.basis_tag
            and np.array_equal(self.ints(), other.ints())
        )

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries, self.basis_tag)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries + other.entries, self.basis_tag)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries - other.entries, self.basis_tag)

    def __repr__(self):
        return f"OperatorMatrix({self.dim}x{self.dim}, {self.basis_tag})"


def commutator(a: galois.FieldArray, b: galois.FieldArray) -> galois.FieldArray:
    return a @ b - b @ a


class Realization(ABC):
    """A restricted Lie algebra together with a faithful restricted representation."""

    #: tag naming the module basis the operators act on
    basis_tag: str = ""
    #: family name used to look up (e, s) constants
    family: str = ""

    @property
    @abstractmethod
    def field(self) -> type:
        """``galois`` field of the operator entries."""

    @abstractmethod
    def operator(self, x) -> galois.FieldArray:
        """Matrix of x on the module."""

    @abstractmethod
    def decompose(self, matrix: galois.FieldArray):
        """Element with the given operator; raises NotInSpanError outside the algebra."""

    @abstractmethod
    def bracket(self, x, y):
        ...

    @abstractmethod
    def basis(self) -> List:
        ...

    @abstractmethod
    def coordinates(self, x) -> galois.FieldArray:
        """Coordinates of x in ``basis()``."""

    def dimension(self) -> int:
        return len(self.basis())

    def zero(self):
        return self.basis()[0].scale(0)

    def constants(self) -> Optional[Tuple[Optional[int], int]]:
        """(e, s) for this algebra when known; e may be None when only s is known."""
        return None

    def module_shape(self) -> Optional[AlgebraShape]:
        """O(m;n) when the module is its monomial basis, otherwise None."""
        prefix = "monomials:"
        if self.basis_tag.startswith(prefix):
            return AlgebraShape.parse(self.basis_tag[len(prefix):])
        return None


class WittRealization(Realization):
    """W(m;n) acting on O(m;n)."""

    family = "witt"

    def __init__(self, shape: AlgebraShape):
        self.shape = shape
        self.basis_tag = f"monomials:{shape.serialize()}"

    @property
    def field(self) -> type:
        return self.shape.field.prime_field

    def operator(self, x: DerivationElement) -> galois.FieldArray:
        return self.field(derivation_operator_matrix(x))

    def decompose(self, matrix: galois.FieldArray) -> DerivationElement:
        return derivation_from_operator(self.shape, matrix)

    def bracket(self, x, y):
        return witt_bracket(x, y)

    def basis(self) -> List[DerivationElement]:
        return witt_basis(self.shape)

    def coordinates(self, x: DerivationElement) -> galois.FieldArray:
        return self.field(x.dense() % self.shape.p)

    def zero(self) -> DerivationElement:
        return DerivationElement.zero(self.shape)

    def constants(self):
        return (0, self.shape.m) if self.shape.is_truncated() else None


class Sl2Realization(Realization):
    """sl_2 on its natural 2-dimensional module."""

    family = "sl2"
    basis_tag = "natural:sl2"

    def __init__(self, spec: FieldSpec):
        self.spec = spec

    @property
    def field(self) -> type:
        return self.spec.prime_field

    def operator(self, x: Sl2Element) -> galois.FieldArray:
        return self.field(x.matrix())

    def decompose(self, matrix: galois.FieldArray) -> Sl2Element:
        ints = as_ints(matrix)
        if (ints[0, 0] + ints[1, 1]) % self.spec.p:
            raise NotInSpanError("Matrix is not traceless")
        return Sl2Element.from_matrix(self.spec, ints)

    def bracket(self, x, y):
        return sl2_bracket(x, y)

    def basis(self) -> List[Sl2Element]:
        return [Sl2Element.basis(self.spec, i) for i in range(3)]

    def coordinates(self, x: Sl2Element) -> galois.FieldArray:
        return self.field(list(x.coords))

    def constants(self):
        return (0, 1)


class OperatorSpanAlgebra(Realization):
    """
    A restricted algebra given by a basis of operators (a p-closure, an adjoint image).

    Elements are ``SpanElement`` coordinate vectors over this basis.
    """

    family = "span"

    def __init__(self, operators: Sequence[galois.FieldArray], basis_tag: str, family: str = "span",
                 constants: Optional[Tuple[Optional[int], int]] = None):
        if not operators:
            raise ValueError("An operator span needs at least one operator")
        self._field = type(operators[0])
        self.operators = list(operators)
        self.size = self.operators[0].shape[0]
        self.basis_tag = basis_tag
        self.family = family
        self._constants = constants
        flat = stack_rows(self._field, [op.reshape(-1) for op in self.operators], self.size * self.size)
        self._decomposer = SpanDecomposer(flat)
        if self._decomposer.rank != len(self.operators):
            raise ValueError(f"Operators are dependent: rank {self._decomposer.rank} of {len(self.operators)}")

    @property
    def field(self) -> type:
        return self._field

    def element(self, coords) -> "SpanElement":
        return SpanElement(self, self._field(coords))

    def operator(self, x: "SpanElement") -> galois.FieldArray:
        result = self._field.Zeros((self.size, self.size))
        for c, op in zip(x.coords, self.operators):
            if c != 0:
                result = result + c * op
        return result

    def decompose(self, matrix: galois.FieldArray) -> "SpanElement":
        return SpanElement(self, self._decomposer.coordinates(matrix.reshape(-1)))

    def contains(self, matrix: galois.FieldArray) -> bool:
        return self._decomposer.contains(matrix.reshape(-1))

    def bracket(self, x, y):
        return self.decompose(commutator(self.operator(x), self.operator(y)))

    def basis(self) -> List["SpanElement"]:
        identity = self._field.Identity(len(self.operators))
        return [SpanElement(self, identity[i]) for i in range(len(self.operators))]

    def coordinates(self, x: "SpanElement") -> galois.FieldArray:
        return x.coords

    def zero(self) -> "SpanElement":
        return SpanElement(self, self._field.Zeros(len(self.operators)))

    def constants(self):
        return self._constants


class SpanElement:
    """Coordinates over the operator basis of an ``OperatorSpanAlgebra``."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: OperatorSpanAlgebra, coords: galois.FieldArray):
        self.algebra = algebra
        self.coords = coords

    def _check(self, other):
        if not isinstance(other, SpanElement) or other.algebra is not self.algebra:
            raise ValueError("Elements of different operator spans")

    def __add__(self, other):
        self._check(other)
        return SpanElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return SpanElement(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return SpanElement(self.algebra, -self.coords)

    def scale(self, c) -> "SpanElement":
        return SpanElement(self.algebra, self.coords * field_scalar(self.algebra.field, c))

    def is_zero(self) -> bool:
        return not np.any(as_ints(self.coords))

    def __eq__(self, other):
        return (
            isinstance(other, SpanElement)
            and other.algebra is self.algebra
            and np.array_equal(as_ints(self.coords), as_ints(other.coords))
        )

    def __hash__(self):
        return hash((id(self.algebra), tuple(as_ints(self.coords))))

    def __repr__(self):
        return f"SpanElement({list(as_ints(self.coords))})"


@lru_cache(maxsize=None)
def witt_realization(shape: AlgebraShape) -> WittRealization:
    return WittRealization(shape)


@lru_cache(maxsize=None)
def sl2_realization(spec: FieldSpec) -> Sl2Realization:
    return Sl2Realization(spec)


@singledispatch
def realization_for(x) -> Realization:
    raise UnregisteredAlgebraError(f"No realization registered for {type(x).__name__}")


@realization_for.register
def _(x: DerivationElement) -> Realization:
    return witt_realization(x.shape)


@realization_for.register
def _(x: Sl2Element) -> Realization:
    return sl2_realization(x.field)


@realization_for.register
def _(x: SpanElement) -> Realization:
    return x.algebra


def as_operator(x) -> OperatorMatrix:
    """Matrix of x on the faithful module of its algebra."""
    realization = realization_for(x)
    return OperatorMatrix(realization.operator(x), realization.basis_tag)

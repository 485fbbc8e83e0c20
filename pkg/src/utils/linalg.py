"""
Exact Linear Algebra over Finite Fields
=======================================

Row spaces, span decomposition and matrix powers on ``galois`` field arrays.
Everything here is exact: no pivot tolerances, no floating point.
"""

from typing import Iterable, List, Optional, Sequence

import galois
import numpy as np

from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class NotInSpanError(ArithmeticError):
    """Raised when a vector cannot be written in a given spanning set."""


def as_ints(array: galois.FieldArray) -> np.ndarray:
    """Integer view of a field array (polynomial encoding for extension fields)."""
    return np.asarray(array.view(np.ndarray), dtype=np.int64)


def stack_rows(field: type, rows: Sequence[galois.FieldArray], length: Optional[int] = None) -> galois.FieldArray:
    """Stack 1-D field arrays into a matrix; an empty input gives a 0 x length matrix."""
    if not rows:
        return field.Zeros((0, length or 0))
    return field(np.vstack([as_ints(row).reshape(1, -1) for row in rows]))


def flatten_operator(matrix: galois.FieldArray) -> galois.FieldArray:
    return matrix.reshape(-1)


def matrix_power(matrix: galois.FieldArray, exponent: int) -> galois.FieldArray:
    """Square-and-multiply power of a square field matrix."""
    if exponent < 0:
        raise ValueError(f"Negative exponent {exponent} not supported")
    field = type(matrix)
    result = field.Identity(matrix.shape[0])
    base = matrix
    while exponent:
        if exponent & 1:
            result = result @ base
        exponent >>= 1
        if exponent:
            base = base @ base
    return result


def frobenius_power(matrix: galois.FieldArray, times: int = 1) -> galois.FieldArray:
    """The p^times-th power, computed as ``times`` successive p-th powers."""
    p = type(matrix).characteristic
    for _ in range(times):
        matrix = matrix_power(matrix, p)
    return matrix


def is_zero(array: galois.FieldArray) -> bool:
    return not np.any(as_ints(array))


def is_nilpotent_matrix(matrix: galois.FieldArray) -> bool:
    """A^n = 0 test via iterated p-th powers until p^k >= n."""
    n = matrix.shape[0]
    p = type(matrix).characteristic
    power, reach = matrix, 1
    while reach < n:
        power = matrix_power(power, p)
        reach *= p
    return is_zero(power)


def rank(matrix: galois.FieldArray) -> int:
    if matrix.shape[0] == 0 or matrix.shape[1] == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix))


def pivot_columns(reduced: galois.FieldArray) -> List[int]:
    """Leading-entry columns of the nonzero rows of a row-reduced matrix."""
    pivots = []
    for row in as_ints(reduced):
        nonzero = np.flatnonzero(row)
        if nonzero.size:
            pivots.append(int(nonzero[0]))
    return pivots


def kernel_basis(matrix: galois.FieldArray) -> List[galois.FieldArray]:
    """Basis of {v : matrix @ v = 0}, one vector per free column of the row reduction."""
    field = type(matrix)
    cols = matrix.shape[1]
    reduced = matrix.row_reduce()
    pivots = pivot_columns(reduced)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vector = field.Zeros(cols)
        vector[free] = 1
        for row, pivot in enumerate(pivots):
            vector[pivot] = -reduced[row, free]
        basis.append(vector)
    return basis


class EchelonBasis:
    """
    Incrementally maintained semi-echelon basis of a row space.

    Each stored row has a unit at its pivot and zeros at the pivots of the
    rows stored before it, so reduction in insertion order is exact.
    """

    def __init__(self, field: type, length: int):
        self.field = field
        self.length = length
        self._rows: List[galois.FieldArray] = []
        self._pivots: List[int] = []
        self.vectors: List[galois.FieldArray] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vector: galois.FieldArray) -> galois.FieldArray:
        residue = vector.copy()
        for pivot, row in zip(self._pivots, self._rows):
            coeff = residue[pivot]
            if coeff != 0:
                residue = residue - coeff * row
        return residue

    def contains(self, vector: galois.FieldArray) -> bool:
        return is_zero(self.reduce(vector))

    def add(self, vector: galois.FieldArray) -> bool:
        """Insert a vector; returns False when it was already in the span."""
        residue = self.reduce(vector)
        nonzero = np.flatnonzero(as_ints(residue))
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        self._rows.append(residue * residue[pivot] ** -1)
        self._pivots.append(pivot)
        self.vectors.append(vector)
        return True

    def extend(self, vectors: Iterable[galois.FieldArray]) -> int:
        return sum(1 for vector in vectors if self.add(vector))


class SpanDecomposer:
    """
    Coordinates of vectors with respect to a fixed spanning set.

    The k x N spanning matrix is pruned to an independent subset, the pivot
    columns of its row reduction are fixed and the square pivot submatrix is
    inverted once; each decomposition is then a single vector-matrix product
    followed by an exact membership re-check. Dependent spanning vectors get
    coefficient zero.
    """

    def __init__(self, vectors: galois.FieldArray):
        self.field = type(vectors)
        self.size, self.length = vectors.shape
        echelon = EchelonBasis(self.field, self.length)
        self.independent = [i for i in range(self.size) if echelon.add(vectors[i])]
        self.rank = len(self.independent)
        if self.rank:
            self._basis = vectors[self.independent]
            self._pivots = pivot_columns(self._basis.row_reduce())
            self._inverse = np.linalg.inv(self._basis[:, self._pivots])
        logger.debug(f"SpanDecomposer: {self.size} vectors of length {self.length}, rank {self.rank}")

    def coordinates(self, vector: galois.FieldArray) -> galois.FieldArray:
        full = self.field.Zeros(self.size)
        if self.rank == 0:
            if not is_zero(vector):
                raise NotInSpanError("Nonzero vector outside the zero span")
            return full
        target = vector.reshape(1, -1)
        solution = target[:, self._pivots] @ self._inverse
        if not np.array_equal(as_ints(solution @ self._basis), as_ints(target)):
            raise NotInSpanError(f"Vector not in the span of {self.size} given vectors (rank {self.rank})")
        full[self.independent] = solution[0]
        return full

    def contains(self, vector: galois.FieldArray) -> bool:
        try:
            self.coordinates(vector)
        except NotInSpanError:
            return False
        return True


def field_scalar(field: type, c) -> galois.FieldArray:
    """Coerce an int (read mod p) or a field element into ``field``."""
    if isinstance(c, galois.FieldArray):
        return c
    return field(int(c) % field.characteristic)

"""
The restricted Lie algebra sl_2 in the basis (e, f, h), realized by 2x2 matrices.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.scalars import FieldSpec
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

E, F, H = 0, 1, 2
SL2_LABELS = ("e", "f", "h")


@dataclass(frozen=True)
class Sl2Element:
    """c_e e + c_f f + c_h h with residues mod p."""

    field: FieldSpec
    coords: Tuple[int, int, int]

    def __post_init__(self):
        if len(self.coords) != 3:
            raise ValueError(f"sl_2 needs three coordinates, got {self.coords}")
        object.__setattr__(self, "coords", tuple(int(c) % self.field.p for c in self.coords))

    @classmethod
    def basis(cls, field: FieldSpec, index: int) -> "Sl2Element":
        coords = [0, 0, 0]
        coords[index] = 1
        return cls(field, tuple(coords))

    def matrix(self) -> np.ndarray:
        c_e, c_f, c_h = self.coords
        return np.array([[c_h, c_e], [c_f, -c_h]], dtype=np.int64) % self.field.p

    @classmethod
    def from_matrix(cls, field: FieldSpec, matrix: np.ndarray) -> "Sl2Element":
        matrix = np.asarray(matrix, dtype=np.int64) % field.p
        if (matrix[0, 0] + matrix[1, 1]) % field.p:
            raise ValueError("Matrix is not traceless")
        return cls(field, (int(matrix[0, 1]), int(matrix[1, 0]), int(matrix[0, 0])))

    def __add__(self, other: "Sl2Element") -> "Sl2Element":
        return Sl2Element(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Sl2Element") -> "Sl2Element":
        return Sl2Element(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: int) -> "Sl2Element":
        return Sl2Element(self.field, tuple(a * c for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        parts = [f"{c}{label}" for c, label in zip(self.coords, SL2_LABELS) if c]
        return " + ".join(parts) if parts else "0"


def _check_p(field: FieldSpec):
    if field.p <= 2:
        raise ValueError("sl_2 needs p > 2")


def sl2_bracket(x: Sl2Element, y: Sl2Element) -> Sl2Element:
    _check_p(x.field)
    a, b = x.matrix(), y.matrix()
    return Sl2Element.from_matrix(x.field, a @ b - b @ a)


def sl2_pth(x: Sl2Element) -> Sl2Element:
    """x^[p] as the p-th power of the 2x2 matrix."""
    _check_p(x.field)
    p = x.field.p
    result = np.eye(2, dtype=np.int64)
    for _ in range(p):
        result = result @ x.matrix() % p
    return Sl2Element.from_matrix(x.field, result)


def sl2_is_nilpotent(x: Sl2Element) -> bool:
    return sl2_pth(x).is_zero()


def sl2_structure_constants(field: FieldSpec) -> np.ndarray:
    """C[i, j, k] with [b_i, b_j] = sum_k C[i, j, k] b_k."""
    constants = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            constants[i, j] = sl2_bracket(Sl2Element.basis(field, i), Sl2Element.basis(field, j)).coords
    return constants


def sl2_pth_table(field: FieldSpec) -> np.ndarray:
    """Row i holds the coordinates of b_i^[p]."""
    return np.array([sl2_pth(Sl2Element.basis(field, i)).coords for i in range(3)], dtype=np.int64)

"""
Simple Restricted Algebras by Structure Constants
=================================================

The coefficient algebra S of a semidirect product (S x O(m;1)) x| D. S is
given by structure constants C[i, j, k] with [b_i, b_j] = sum_k C[i, j, k] b_k
and the table of p-th powers of its basis. Elements are integer coordinate
vectors mod p. The adjoint representation is faithful for the algebras used
here (ad S = Der S), so p-th powers of arbitrary elements are read off
(ad x)^p.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from src.cartan_algebras import SL2_LABELS, sl2_pth_table, sl2_structure_constants
from src.scalars import FieldSpec
from src.utils.linalg import SpanDecomposer, as_ints, is_nilpotent_matrix, matrix_power
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

SVector = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SAlgebra:
    """
    S with basis b_0..b_{dim-1}.

    ``nilpotency_test`` replaces the default test (ad x nilpotent) when given.
    """

    field: FieldSpec
    constants: np.ndarray
    pth_table: np.ndarray
    labels: Tuple[str, ...]
    name: str = "S"
    nilpotency_test: Optional[Callable[["SAlgebra", SVector], bool]] = None
    _cache: Dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        p = self.field.p
        constants = np.asarray(self.constants, dtype=np.int64) % p
        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "pth_table", np.asarray(self.pth_table, dtype=np.int64) % p)
        dim = constants.shape[0]
        if constants.shape != (dim, dim, dim):
            raise ValueError(f"Structure constants must be dim x dim x dim, got {constants.shape}")
        if self.pth_table.shape != (dim, dim):
            raise ValueError(f"p-th power table must be {dim} x {dim}, got {self.pth_table.shape}")
        if len(self.labels) != dim:
            raise ValueError(f"Expected {dim} labels, got {len(self.labels)}")

    @classmethod
    def sl2(cls, field: FieldSpec) -> "SAlgebra":
        """sl_2 in the basis (e, f, h)."""
        if field.p <= 2:
            raise ValueError("sl_2 needs p > 2")
        return cls(field, sl2_structure_constants(field), sl2_pth_table(field), SL2_LABELS, name="sl2")

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    @property
    def p(self) -> int:
        return self.field.p

    def vector(self, coords: Sequence[int]) -> SVector:
        if len(coords) != self.dim:
            raise ValueError(f"Expected {self.dim} coordinates, got {len(coords)}")
        return tuple(int(c) % self.p for c in coords)

    def basis_vector(self, i: int, c: int = 1) -> SVector:
        coords = [0] * self.dim
        coords[i] = c
        return self.vector(coords)

    def zero(self) -> SVector:
        return (0,) * self.dim

    def bracket(self, x: Sequence[int], y: Sequence[int]) -> SVector:
        result = np.einsum("i,j,ijk->k", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64), self.constants)
        return self.vector(result % self.p)

    def ad(self, x: Sequence[int]) -> np.ndarray:
        """Matrix of ad x: column j holds [x, b_j]."""
        matrix = np.einsum("i,ijk->kj", np.asarray(x, dtype=np.int64), self.constants)
        return matrix % self.p

    def _ad_basis(self) -> SpanDecomposer:
        if "ad" not in self._cache:
            gf = self.field.prime_field
            rows = [self.ad(self.basis_vector(i)).reshape(-1) for i in range(self.dim)]
            decomposer = SpanDecomposer(gf(np.vstack(rows)))
            if decomposer.rank != self.dim:
                raise ValueError(f"ad is not faithful on {self.name}: rank {decomposer.rank} < {self.dim}")
            self._cache["ad"] = decomposer
        return self._cache["ad"]

    def from_ad(self, matrix: np.ndarray) -> SVector:
        """The element whose adjoint matrix is ``matrix``."""
        gf = self.field.prime_field
        coords = self._ad_basis().coordinates(gf(np.asarray(matrix, dtype=np.int64).reshape(-1) % self.p))
        return self.vector(as_ints(coords))

    def pth(self, x: Sequence[int]) -> SVector:
        """x^[p] from ad(x^[p]) = (ad x)^p."""
        gf = self.field.prime_field
        return self.from_ad(as_ints(matrix_power(gf(self.ad(x)), self.p)))

    def is_nilpotent(self, x: Sequence[int]) -> bool:
        if self.nilpotency_test is not None:
            return self.nilpotency_test(self, tuple(x))
        return is_nilpotent_matrix(self.field.prime_field(self.ad(x)))

    def validate(self) -> bool:
        """Antisymmetry, Jacobi, and ad(b_i^[p]) = (ad b_i)^p for every basis element."""
        C, p, dim = self.constants, self.p, self.dim
        if np.any((C + C.transpose(1, 0, 2)) % p):
            logger.error(f"{self.name}: structure constants are not antisymmetric")
            return False
        # [b_i,[b_j,b_k]] + cyclic, as a dim^4 tensor
        inner = np.einsum("jkl,ilm->ijkm", C, C)
        jacobi = inner + inner.transpose(1, 2, 0, 3) + inner.transpose(2, 0, 1, 3)
        if np.any(jacobi % p):
            logger.error(f"{self.name}: Jacobi identity fails")
            return False
        for i in range(dim):
            b = self.basis_vector(i)
            if self.pth(b) != tuple(int(c) for c in self.pth_table[i]):
                logger.error(f"{self.name}: p-th power of basis element {self.labels[i]} disagrees with the table")
                return False
        return True

    def format(self, x: Sequence[int]) -> str:
        parts = [f"{c}{label}" if c != 1 else label for c, label in zip(x, self.labels) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"SAlgebra({self.name}, dim={self.dim}, p={self.p})"

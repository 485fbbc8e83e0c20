"""
Special, Hamiltonian and Contact Algebras
=========================================

S, H and K are produced by their linear maps into W(m;n):

- D_{i,j}(f) = d_j(f) d_i - d_i(f) d_j, spanning the special algebra S(m;n)^(1)
- D_H(f) = sum_i sigma(i) d_i(f) d_{i'} on O(2r;n), with the Poisson bracket
- D_K(f) on O(2r+1;n), with the contact bracket <f, g> = D_K(f)(g) - 2 g d_m(f)

Indices in this module are 1-based, as in the usual notation.
"""

from dataclasses import dataclass
from typing import Iterable, List

import numpy as np

from src.cartan_algebras.witt import DerivationElement, witt_apply
from src.divided_power import AlgebraShape, DPElement, dp_mul, dp_partial, monomials
from src.utils.linalg import rank
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class HamiltonianIndex:
    """Index j in 1..2r with sign sigma(j) and partner j'."""

    r: int
    j: int

    def __post_init__(self):
        if not 1 <= self.j <= 2 * self.r:
            raise ValueError(f"Index {self.j} outside 1..{2 * self.r}")

    @property
    def sigma(self) -> int:
        return 1 if self.j <= self.r else -1

    @property
    def partner(self) -> int:
        return self.j + self.r if self.j <= self.r else self.j - self.r


def _check_index(shape: AlgebraShape, i: int):
    if not 1 <= i <= shape.m:
        raise IndexError(f"Index {i} outside 1..{shape.m}")


def special_D_ij(i: int, j: int, f: DPElement) -> DerivationElement:
    shape = f.shape
    _check_index(shape, i)
    _check_index(shape, j)
    coeffs = [DPElement.zero(shape)] * shape.m
    if i == j:
        return DerivationElement(shape, coeffs)
    coeffs[i - 1] = dp_partial(f, j - 1)
    coeffs[j - 1] = -dp_partial(f, i - 1)
    return DerivationElement(shape, coeffs)


def _half_rank(shape: AlgebraShape, parity: int) -> int:
    if shape.m % 2 != parity or shape.m < 2:
        kind = "even" if parity == 0 else "odd (>= 3)"
        raise ValueError(f"Need an {kind} number of variables, got m={shape.m}")
    if shape.p <= 2:
        raise ValueError("Need p > 2")
    return shape.m // 2


def hamiltonian_D_H(f: DPElement) -> DerivationElement:
    shape = f.shape
    r = _half_rank(shape, 0)
    coeffs = [DPElement.zero(shape)] * shape.m
    for j in range(1, 2 * r + 1):
        index = HamiltonianIndex(r, j)
        coeffs[index.partner - 1] = coeffs[index.partner - 1] + dp_partial(f, j - 1).scale(index.sigma)
    return DerivationElement(shape, coeffs)


def poisson_bracket(f: DPElement, g: DPElement) -> DPElement:
    """{f, g} = D_H(f)(g)."""
    return witt_apply(hamiltonian_D_H(f), g)


def contact_D_K(f: DPElement) -> DerivationElement:
    shape = f.shape
    r = _half_rank(shape, 1)
    m = shape.m
    last = dp_partial(f, m - 1)
    coeffs = [DPElement.zero(shape)] * m
    tail = f.scale(2)
    for j in range(1, 2 * r + 1):
        index = HamiltonianIndex(r, j)
        x_partner = DPElement.variable(shape, index.partner - 1)
        term = dp_partial(f, j - 1).scale(index.sigma) + dp_mul(x_partner, last)
        coeffs[index.partner - 1] = coeffs[index.partner - 1] + term
        tail = tail - dp_mul(DPElement.variable(shape, j - 1), dp_partial(f, j - 1))
    coeffs[m - 1] = tail
    return DerivationElement(shape, coeffs)


def contact_bracket(f: DPElement, g: DPElement) -> DPElement:
    """<f, g> = D_K(f)(g) - 2 g d_m(f)."""
    m = f.shape.m
    return witt_apply(contact_D_K(f), g) - dp_mul(g, dp_partial(f, m - 1)).scale(2)


def span_dimension(elements: Iterable[DerivationElement], shape: AlgebraShape) -> int:
    """Rank over F_p of the coordinate vectors of the given derivations."""
    rows = [D.dense() for D in elements]
    if not rows:
        return 0
    field = shape.field.prime_field
    return rank(field(np.vstack(rows) % shape.p))


def special_generators(shape: AlgebraShape) -> List[DerivationElement]:
    return [
        special_D_ij(i, j, DPElement.monomial(shape, a))
        for i in range(1, shape.m + 1)
        for j in range(i + 1, shape.m + 1)
        for a in monomials(shape)
    ]


def special_span_dimension(shape: AlgebraShape) -> int:
    """dim span{D_ij(x^(a))}; (m-1)(p^{|n|}-1) for the simple special algebra."""
    dimension = span_dimension(special_generators(shape), shape)
    logger.info(f"Special span in {shape!r}: {dimension}")
    return dimension


def hamiltonian_generators(shape: AlgebraShape) -> List[DerivationElement]:
    """D_H(x^(a)) for 0 < a < top, the basis of H(2r;n)^(2)."""
    zero, top = (0,) * shape.m, shape.top
    return [hamiltonian_D_H(DPElement.monomial(shape, a)) for a in monomials(shape) if a not in (zero, top)]


def hamiltonian_span_dimension(shape: AlgebraShape) -> int:
    dimension = span_dimension(hamiltonian_generators(shape), shape)
    logger.info(f"Hamiltonian span in {shape!r}: {dimension}")
    return dimension


def contact_generators(shape: AlgebraShape) -> List[DerivationElement]:
    """D_K(x^(a)) for all a; when 2r+4 = 0 mod p the top monomial is left out."""
    r = _half_rank(shape, 1)
    skip_top = (2 * r + 4) % shape.p == 0
    return [contact_D_K(DPElement.monomial(shape, a)) for a in monomials(shape) if not (skip_top and a == shape.top)]


def contact_span_dimension(shape: AlgebraShape) -> int:
    dimension = span_dimension(contact_generators(shape), shape)
    logger.info(f"Contact span in {shape!r}: {dimension}")
    return dimension


def expected_special_dimension(shape: AlgebraShape) -> int:
    return (shape.m - 1) * (shape.dim - 1)


def expected_hamiltonian_dimension(shape: AlgebraShape) -> int:
    return shape.dim - 2


def expected_contact_dimension(shape: AlgebraShape) -> int:
    r = (shape.m - 1) // 2
    return shape.dim - 1 if (2 * r + 4) % shape.p == 0 else shape.dim

"""
The p-Envelope W(1;n)_p
=======================

W(1;n)_p = W(1;n) + k d^p + ... + k d^{p^{n-1}} inside Der O(1;n). An element
is f d + sum_i alpha_i d^{p^i}; d^{p^i} lowers divided powers by p^i, so

    [d^{p^i}, x^(a) d] = x^(a - p^i) d

and the d^{p^i} commute with each other. The faithful module is O(1;n) with its
monomial basis, the same module W(1;n) acts on, so admissible automorphisms
conjugate both through one operator.
"""

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.cartan_algebras import (
    DerivationElement,
    derivation_filtration_degree,
    derivation_operator_matrix,
    witt_apply,
    witt_bracket,
)
from src.divided_power import AlgebraShape, DPElement, dp_filtration_degree
from src.restricted import Realization, pth_power, realization_for
from src.utils.linalg import NotInSpanError, as_ints
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _check_shape(shape: AlgebraShape):
    if shape.m != 1:
        raise ValueError(f"The p-envelope lives over O(1;n), got {shape!r}")


def lower(f: DPElement, k: int) -> DPElement:
    """d^k(f): x^(a) -> x^(a-k)."""
    return DPElement(f.shape, {(a - k,): c for (a,), c in f.terms.items() if a >= k}, check=False)


class PEnvelopeElement:
    """poly d + sum_{i=1}^{n-1} tails[i-1] d^{p^i}; tails are integers mod p."""

    __slots__ = ("shape", "poly", "tails")

    def __init__(self, shape: AlgebraShape, poly: Optional[DPElement] = None, tails: Sequence[int] = ()):
        _check_shape(shape)
        shape = shape.with_split(None)
        n, p = shape.n[0], shape.p
        poly = DPElement.zero(shape) if poly is None else poly
        if poly.shape.with_split(None) != shape:
            raise ValueError(f"Coefficient lives in {poly.shape!r}, not {shape!r}")
        tails = tuple(int(c) % p for c in tails)
        if len(tails) > n - 1:
            raise ValueError(f"At most {n - 1} tail coefficients for {shape!r}, got {len(tails)}")
        self.shape = shape
        self.poly = DPElement(shape, poly.terms, check=False)
        self.tails: Tuple[int, ...] = tails + (0,) * (n - 1 - len(tails))

    @property
    def n(self) -> int:
        return self.shape.n[0]

    @classmethod
    def zero(cls, shape: AlgebraShape) -> "PEnvelopeElement":
        return cls(shape)

    @classmethod
    def from_derivation(cls, D: DerivationElement) -> "PEnvelopeElement":
        return cls(D.shape, D.coeffs[0])

    @classmethod
    def monomial(cls, shape: AlgebraShape, a: int, c: int = 1) -> "PEnvelopeElement":
        """c x^(a) d."""
        return cls(shape, DPElement.monomial(shape.with_split(None), (a,), c))

    @classmethod
    def partial_power(cls, shape: AlgebraShape, i: int, c: int = 1) -> "PEnvelopeElement":
        """c d^{p^i}, 0 <= i <= n-1."""
        n = shape.n[0]
        if not 0 <= i < n:
            raise ValueError(f"d^(p^{i}) is not in W(1;{n})_p")
        if i == 0:
            return cls(shape, DPElement.constant(shape.with_split(None), c))
        tails = [0] * (n - 1)
        tails[i - 1] = c
        return cls(shape, tails=tails)

    @property
    def derivation(self) -> DerivationElement:
        """The W(1;n) part f d."""
        return DerivationElement(self.shape, [self.poly])

    def tail_coefficient(self, i: int) -> int:
        """Coefficient of d^{p^i}; for i = 0 the constant term of the coefficient of d."""
        return self.poly.constant_term if i == 0 else self.tails[i - 1]

    def in_witt(self) -> bool:
        return not any(self.tails)

    def __call__(self, f: DPElement) -> DPElement:
        p = self.shape.p
        result = witt_apply(self.derivation, f)
        for i, c in enumerate(self.tails, start=1):
            if c:
                result = result + lower(f, p**i).scale(c)
        return result

    def _check(self, other: "PEnvelopeElement"):
        if not isinstance(other, PEnvelopeElement) or other.shape != self.shape:
            raise ValueError("Elements of different p-envelopes")

    def __add__(self, other: "PEnvelopeElement") -> "PEnvelopeElement":
        self._check(other)
        return PEnvelopeElement(self.shape, self.poly + other.poly, [a + b for a, b in zip(self.tails, other.tails)])

    def __sub__(self, other: "PEnvelopeElement") -> "PEnvelopeElement":
        self._check(other)
        return PEnvelopeElement(self.shape, self.poly - other.poly, [a - b for a, b in zip(self.tails, other.tails)])

    def __neg__(self) -> "PEnvelopeElement":
        return self.scale(-1)

    def scale(self, c: int) -> "PEnvelopeElement":
        return PEnvelopeElement(self.shape, self.poly.scale(c), [a * c for a in self.tails])

    def is_zero(self) -> bool:
        return self.poly.is_zero() and not any(self.tails)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, PEnvelopeElement)
            and other.shape == self.shape
            and self.poly == other.poly
            and self.tails == other.tails
        )

    def __hash__(self):
        return hash((self.shape, self.poly, self.tails))

    def serialize(self) -> str:
        body = ",".join(f"{a}:{c}" for (a,), c in self.poly.items())
        return f"poly{{{body}}};tails{{{','.join(str(c) for c in self.tails)}}}"

    @classmethod
    def parse(cls, text: str, shape: AlgebraShape) -> "PEnvelopeElement":
        head, separator, rest = text.strip().partition("};tails{")
        if not separator or not head.startswith("poly{") or not rest.endswith("}"):
            raise ValueError(f"Malformed p-envelope element {text!r}")
        poly = DPElement.parse(f"|{head[len('poly{'):]}", shape.with_split(None))
        tails = [int(c) for c in rest[:-1].split(",") if c.strip()]
        return cls(shape, poly, tails)

    def __repr__(self):
        parts = [f"({self.poly!r})*d"] if self.poly else []
        parts += [f"{c}*d^{self.shape.p ** i}" for i, c in enumerate(self.tails, start=1) if c]
        return " + ".join(parts) if parts else "0"


def lp_bracket(A: PEnvelopeElement, B: PEnvelopeElement) -> PEnvelopeElement:
    A._check(B)
    p = A.shape.p
    result = witt_bracket(A.derivation, B.derivation).coeffs[0]
    for i, c in enumerate(A.tails, start=1):
        if c:
            result = result + lower(B.poly, p**i).scale(c)
    for i, c in enumerate(B.tails, start=1):
        if c:
            result = result - lower(A.poly, p**i).scale(c)
    return PEnvelopeElement(A.shape, result)


def lp_pth(A: PEnvelopeElement) -> PEnvelopeElement:
    """A^[p] from the p-th power of its operator on O(1;n)."""
    return pth_power(A)


def in_l0(D: PEnvelopeElement) -> bool:
    """D in L_(0) = W(1;n)_(0): no d^{p^i} tail and f in the maximal ideal."""
    return D.in_witt() and (D.poly.is_zero() or derivation_filtration_degree(D.derivation) >= 0)


def lp_in_filtration(D: PEnvelopeElement, level: int) -> bool:
    """D in L_(level) for level >= -1."""
    if level < 0:
        return D.in_witt()
    return D.in_witt() and (D.poly.is_zero() or dp_filtration_degree(D.poly) >= level + 1)


class LpRealization(Realization):
    """W(1;n)_p acting on O(1;n)."""

    family = "zassenhaus-envelope"

    def __init__(self, shape: AlgebraShape):
        _check_shape(shape)
        self.shape = shape.with_split(None)
        self.basis_tag = f"monomials:{self.shape.serialize()}"

    @property
    def field(self) -> type:
        return self.shape.field.prime_field

    def _lowering(self, k: int) -> np.ndarray:
        dim = self.shape.dim
        return np.eye(dim, k=k, dtype=np.int64)

    def _integer_operator(self, x: PEnvelopeElement) -> np.ndarray:
        p = self.shape.p
        matrix = derivation_operator_matrix(x.derivation)
        for i, c in enumerate(x.tails, start=1):
            if c:
                matrix = (matrix + c * self._lowering(p**i)) % p
        return matrix

    def operator(self, x: PEnvelopeElement) -> galois.FieldArray:
        return self.field(self._integer_operator(x))

    def decompose(self, matrix: galois.FieldArray) -> PEnvelopeElement:
        """f is the image of x; alpha_j is the constant term of the residual image of x^(p^j)."""
        shape, p = self.shape, self.shape.p
        ints = as_ints(matrix) % p
        poly = DPElement.from_dense(shape, ints[:, 1])
        residual = (ints - derivation_operator_matrix(DerivationElement(shape, [poly]))) % p
        tails = [int(residual[0, p**j]) for j in range(1, shape.n[0])]
        candidate = PEnvelopeElement(shape, poly, tails)
        if not np.array_equal(self._integer_operator(candidate), ints):
            logger.error("Operator escapes L_p")
            raise NotInSpanError("escapes L_p")
        return candidate

    def bracket(self, x, y):
        return lp_bracket(x, y)

    def basis(self) -> List[PEnvelopeElement]:
        shape = self.shape
        elements = [PEnvelopeElement.monomial(shape, a) for a in range(shape.dim)]
        elements += [PEnvelopeElement.partial_power(shape, i) for i in range(1, shape.n[0])]
        return elements

    def witt_basis(self) -> List[PEnvelopeElement]:
        return [PEnvelopeElement.monomial(self.shape, a) for a in range(self.shape.dim)]

    def coordinates(self, x: PEnvelopeElement) -> galois.FieldArray:
        return self.field(np.concatenate([x.poly.dense(), np.array(x.tails, dtype=np.int64)]) % self.shape.p)

    def zero(self) -> PEnvelopeElement:
        return PEnvelopeElement.zero(self.shape)

    def constants(self):
        # toral rank n; the offset e is left to the caller
        return (None, self.shape.n[0])


@lru_cache(maxsize=None)
def lp_realization(shape: AlgebraShape) -> LpRealization:
    return LpRealization(shape.with_split(None))


@realization_for.register
def _(x: PEnvelopeElement) -> Realization:
    return lp_realization(x.shape)


def as_envelope_element(D) -> PEnvelopeElement:
    """Lift a W(1;n) derivation into W(1;n)_p; envelope elements pass through."""
    if isinstance(D, PEnvelopeElement):
        return D
    if isinstance(D, DerivationElement):
        return PEnvelopeElement.from_derivation(D)
    raise TypeError(f"Expected an element of W(1;n)_p, got {type(D).__name__}")


def random_envelope_element(shape: AlgebraShape, rng: np.random.Generator, density: float = 0.5,
                            tails: bool = True) -> PEnvelopeElement:
    """Sparse random element; coefficients are uniform nonzero residues on a random support."""
    _check_shape(shape)
    shape = shape.with_split(None)
    p = shape.p
    mask = rng.random(shape.dim) < density
    values = np.where(mask, rng.integers(1, p, size=shape.dim), 0)
    poly = DPElement.from_dense(shape, values)
    tail = [int(c) for c in rng.integers(0, p, size=shape.n[0] - 1)] if tails else []
    return PEnvelopeElement(shape, poly, tail)

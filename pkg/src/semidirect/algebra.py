"""
Semidirect Products (S x O(m;1)) x| D
======================================

L = (S x O(m;1)) x| (Id_S x D) for a restricted algebra S given by structure
constants and a transitive restricted subalgebra D of W(m;1). Elements are
sum_i b_i x f_i + d with f_i in O(m;1) and d in D; the bracket is

    [y x f, z x g] = [y, z] x fg,    [d, y x g] = y x d(g),

and D brackets as in W(m;1). The faithful module is S x O(m;1) itself, with
y x f acting by ad y x (multiplication by f) and d by Id_S x d.
"""

import re
from typing import Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.automorphisms import InvalidAutomorphismError, TruncatedAutomorphism, conjugate, truncated_conjugate
from src.cartan_algebras import (
    DerivationElement,
    derivation_from_operator,
    derivation_operator_matrix,
    witt_apply,
    witt_basis,
    witt_bracket,
)
from src.divided_power import AlgebraShape, DPElement, dp_mul, monomials, multiplication_matrix
from src.restricted import Realization, pth_power, realization_for
from src.semidirect.salgebra import SAlgebra, SVector
from src.utils.linalg import NotInSpanError, SpanDecomposer, as_ints, rank, stack_rows
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

_TENSOR_ENTRY = re.compile(r"(\d+)=\[([^\]]*)\]")


class SemidirectProduct:
    """The ambient L for fixed S, O(m;1) and D (by default D = W(m;1))."""

    def __init__(self, salg: SAlgebra, shape: AlgebraShape, tail_basis: Optional[Sequence[DerivationElement]] = None,
                 name: Optional[str] = None):
        if not shape.is_truncated():
            raise ValueError(f"Semidirect products are built over O(m;1), got {shape!r}")
        if shape.field != salg.field:
            raise ValueError("S and O(m;1) must share the base field")
        self.salg = salg
        self.shape = shape.with_split(None)
        self.full = tail_basis is None
        self.tail_basis: List[DerivationElement] = witt_basis(self.shape) if self.full else list(tail_basis)
        for d in self.tail_basis:
            if d.shape != self.shape:
                raise ValueError(f"Tail basis element lives in {d.shape!r}, not {self.shape!r}")
        self.name = name or f"{salg.name}⊗O({shape.m};1)⋊{'W' if self.full else 'D'}"
        gf = self.field
        rows = [gf(d.dense() % shape.p) for d in self.tail_basis]
        self._tail_decomposer = SpanDecomposer(stack_rows(gf, rows, shape.m * shape.dim))
        if self._tail_decomposer.rank != len(self.tail_basis):
            raise ValueError("Tail basis is linearly dependent")
        self._ad_basis = [salg.ad(salg.basis_vector(i)) for i in range(salg.dim)]
        self.realization = SemidirectRealization(self)
        logger.debug(f"Built {self.name}: dimension {self.dimension()}")

    @classmethod
    def with_partials(cls, salg: SAlgebra, shape: AlgebraShape) -> "SemidirectProduct":
        """D = k d_1 + ... + k d_m; for m = 1 this is the (3p+1)-dimensional algebra over sl_2."""
        shape = shape.with_split(None)
        basis = [DerivationElement.partial(shape, i) for i in range(shape.m)]
        return cls(salg, shape, basis, name=f"{salg.name}⊗O({shape.m};1)⋊span(∂)")

    @property
    def field(self) -> type:
        return self.shape.field.prime_field

    def dimension(self) -> int:
        return self.salg.dim * self.shape.dim + len(self.tail_basis)

    def contains_tail(self, d: DerivationElement) -> bool:
        if d.shape != self.shape:
            return False
        return self.full or self._tail_decomposer.contains(self.field(d.dense() % self.shape.p))

    def tail_coordinates(self, d: DerivationElement) -> galois.FieldArray:
        return self._tail_decomposer.coordinates(self.field(d.dense() % self.shape.p))

    def is_transitive(self) -> bool:
        """D + W_(0) = W(m;1): the constant parts of D span all m directions."""
        gf = self.field
        rows = [[f.constant_term for f in d.coeffs] for d in self.tail_basis]
        return rank(gf(np.array(rows, dtype=np.int64) % self.shape.p)) == self.shape.m

    def is_restricted_subalgebra(self) -> bool:
        """Brackets and p-th powers of the tail basis stay in D."""
        if self.full:
            return True
        for i, d in enumerate(self.tail_basis):
            if not self.contains_tail(pth_power(d)):
                return False
            for e in self.tail_basis[:i]:
                if not self.contains_tail(witt_bracket(d, e)):
                    return False
        return True

    def validate(self) -> bool:
        checks = {
            "structure constants": self.salg.validate(),
            "transitive": self.is_transitive(),
            "restricted": self.is_restricted_subalgebra(),
        }
        for label, ok in checks.items():
            if not ok:
                logger.error(f"{self.name}: {label} check failed")
        return all(checks.values())

    def __repr__(self):
        return f"SemidirectProduct({self.name}, dim={self.dimension()})"


class SemidirectElement:
    """sum_i b_i x tensor[i] + tail."""

    __slots__ = ("ambient", "tensor", "tail")

    def __init__(self, ambient: SemidirectProduct, tensor: Optional[Sequence[DPElement]] = None,
                 tail: Optional[DerivationElement] = None):
        shape = ambient.shape
        if tensor is None:
            tensor = [DPElement.zero(shape)] * ambient.salg.dim
        tensor = tuple(tensor)
        if len(tensor) != ambient.salg.dim:
            raise ValueError(f"Expected {ambient.salg.dim} tensor components, got {len(tensor)}")
        for f in tensor:
            if f.shape != shape:
                raise ValueError(f"Tensor component lives in {f.shape!r}, not {shape!r}")
        if tail is None:
            tail = DerivationElement.zero(shape)
        if tail.shape != shape:
            raise ValueError(f"Tail lives in {tail.shape!r}, not {shape!r}")
        self.ambient = ambient
        self.tensor: Tuple[DPElement, ...] = tensor
        self.tail = tail

    @property
    def shape(self) -> AlgebraShape:
        return self.ambient.shape

    @classmethod
    def zero(cls, ambient: SemidirectProduct) -> "SemidirectElement":
        return cls(ambient)

    @classmethod
    def pure(cls, ambient: SemidirectProduct, s: Sequence[int], f: DPElement) -> "SemidirectElement":
        """s x f for an S-vector s."""
        return cls(ambient, [f.scale(c) for c in ambient.salg.vector(s)])

    @classmethod
    def derivation(cls, ambient: SemidirectProduct, d: DerivationElement) -> "SemidirectElement":
        if not ambient.contains_tail(d):
            raise ValueError(f"{d!r} is not in D")
        return cls(ambient, tail=d)

    def s_part(self, a: Sequence[int]) -> SVector:
        """S-vector multiplying x^(a)."""
        return tuple(f.coefficient(tuple(a)) for f in self.tensor)

    def constant_part(self) -> SVector:
        return self.s_part((0,) * self.shape.m)

    def tensor_support(self) -> List[Tuple[int, ...]]:
        support = set()
        for f in self.tensor:
            support.update(f.terms)
        return sorted(support, key=self.shape.rank)

    def tensor_part(self) -> "SemidirectElement":
        return SemidirectElement(self.ambient, self.tensor)

    def _check(self, other: "SemidirectElement"):
        if not isinstance(other, SemidirectElement) or other.ambient is not self.ambient:
            raise ValueError("Elements of different semidirect products")

    def __add__(self, other: "SemidirectElement") -> "SemidirectElement":
        self._check(other)
        return SemidirectElement(self.ambient, [f + g for f, g in zip(self.tensor, other.tensor)], self.tail + other.tail)

    def __sub__(self, other: "SemidirectElement") -> "SemidirectElement":
        self._check(other)
        return SemidirectElement(self.ambient, [f - g for f, g in zip(self.tensor, other.tensor)], self.tail - other.tail)

    def __neg__(self) -> "SemidirectElement":
        return self.scale(-1)

    def scale(self, c: int) -> "SemidirectElement":
        return SemidirectElement(self.ambient, [f.scale(c) for f in self.tensor], self.tail.scale(c))

    def is_zero(self) -> bool:
        return self.tail.is_zero() and all(f.is_zero() for f in self.tensor)

    def __eq__(self, other):
        return (
            isinstance(other, SemidirectElement)
            and other.ambient is self.ambient
            and self.tensor == other.tensor
            and self.tail == other.tail
        )

    def __hash__(self):
        return hash((id(self.ambient), self.tensor, self.tail))

    def serialize(self) -> str:
        entries = []
        for i, f in enumerate(self.tensor):
            if f:
                body = ",".join(f"{self.shape.rank(a)}:{c}" for a, c in f.items())
                entries.append(f"{i}=[{body}]")
        return f"tensor{{{','.join(entries)}}};tail{{{self.tail.serialize()}}}"

    @classmethod
    def parse(cls, text: str, ambient: SemidirectProduct) -> "SemidirectElement":
        head, separator, rest = text.strip().partition("};tail{")
        if not separator or not head.startswith("tensor{") or not rest.endswith("}"):
            raise ValueError(f"Malformed semidirect element {text!r}")
        shape = ambient.shape
        tensor = [DPElement.zero(shape)] * ambient.salg.dim
        for index, body in _TENSOR_ENTRY.findall(head[len("tensor{"):]):
            tensor[int(index)] = DPElement.parse(f"|{body}", shape)
        tail = DerivationElement.parse(rest[:-1])
        if tail.shape.with_split(None) != shape:
            raise ValueError(f"Tail shape {tail.shape!r} differs from {shape!r}")
        tail = DerivationElement(shape, [DPElement(shape, f.terms) for f in tail.coeffs])
        if not ambient.contains_tail(tail):
            raise ValueError("Parsed tail is not in D")
        return cls(ambient, tensor, tail)

    def __repr__(self):
        salg = self.ambient.salg
        parts = [f"{salg.labels[i]}⊗({f!r})" for i, f in enumerate(self.tensor) if f]
        if self.tail:
            parts.append(repr(self.tail))
        return " + ".join(parts) if parts else "0"


def semi_bracket(A: SemidirectElement, B: SemidirectElement) -> SemidirectElement:
    A._check(B)
    ambient = A.ambient
    C = ambient.salg.constants
    shape = ambient.shape
    tensor = [DPElement.zero(shape)] * ambient.salg.dim
    for i, f in enumerate(A.tensor):
        if not f:
            continue
        for j, g in enumerate(B.tensor):
            if not g or not C[i, j].any():
                continue
            product = dp_mul(f, g)
            if product:
                for k in np.flatnonzero(C[i, j]):
                    tensor[k] = tensor[k] + product.scale(int(C[i, j, k]))
    if A.tail:
        tensor = [t + witt_apply(A.tail, g) for t, g in zip(tensor, B.tensor)]
    if B.tail:
        tensor = [t - witt_apply(B.tail, f) for t, f in zip(tensor, A.tensor)]
    return SemidirectElement(ambient, tensor, witt_bracket(A.tail, B.tail))


def semi_pth(A: SemidirectElement) -> SemidirectElement:
    """A^[p]: the p-th power of its operator on S x O(m;1), decomposed back into L."""
    return pth_power(A)


class SemidirectRealization(Realization):
    """L acting on S x O(m;1); basis b_k x x^(r) sits at position k * p^m + r."""

    family = "semidirect"

    def __init__(self, ambient: SemidirectProduct):
        self.ambient = ambient
        self.basis_tag = f"adjoint:{ambient.salg.name}⊗{ambient.shape.serialize()}"

    @property
    def field(self) -> type:
        return self.ambient.field

    def _integer_operator(self, x: SemidirectElement) -> np.ndarray:
        ambient = self.ambient
        P, p = ambient.shape.dim, ambient.shape.p
        size = ambient.salg.dim * P
        result = np.zeros((size, size), dtype=np.int64)
        for ad, f in zip(ambient._ad_basis, x.tensor):
            if f:
                result = (result + np.kron(ad, multiplication_matrix(f))) % p
        if x.tail:
            result = (result + np.kron(np.eye(ambient.salg.dim, dtype=np.int64), derivation_operator_matrix(x.tail))) % p
        return result

    def operator(self, x: SemidirectElement) -> galois.FieldArray:
        if x.ambient is not self.ambient:
            raise ValueError("Element of a different semidirect product")
        return self.field(self._integer_operator(x))

    def decompose(self, matrix: galois.FieldArray) -> SemidirectElement:
        ambient = self.ambient
        shape, salg = ambient.shape, ambient.salg
        P = shape.dim
        ints = as_ints(matrix) % shape.p
        if ints.shape != (salg.dim * P, salg.dim * P):
            raise NotInSpanError(f"Operator of size {ints.shape} does not act on S⊗O({shape.m};1)")
        columns = [dict() for _ in range(salg.dim)]
        basis = monomials(shape)
        # images of b_j x 1 determine the tensor part monomial by monomial
        for r in range(P):
            coords = salg.from_ad(ints[r::P, ::P])
            for i, c in enumerate(coords):
                if c:
                    columns[i][basis[r]] = c
        tensor = [DPElement(shape, terms) for terms in columns]
        residual = (ints - self._integer_operator(SemidirectElement(ambient, tensor))) % shape.p
        tail = derivation_from_operator(shape, residual[:P, :P])
        candidate = SemidirectElement(ambient, tensor, tail)
        if not np.array_equal(self._integer_operator(candidate), ints):
            raise NotInSpanError("Operator is not in the image of the semidirect product")
        if not ambient.contains_tail(tail):
            raise NotInSpanError(f"Derivation part {tail!r} is outside D")
        return candidate

    def bracket(self, x, y):
        return semi_bracket(x, y)

    def basis(self) -> List[SemidirectElement]:
        ambient = self.ambient
        elements = [
            SemidirectElement.pure(ambient, ambient.salg.basis_vector(i), DPElement.monomial(ambient.shape, a))
            for i in range(ambient.salg.dim)
            for a in monomials(ambient.shape)
        ]
        elements.extend(SemidirectElement(ambient, tail=d) for d in ambient.tail_basis)
        return elements

    def coordinates(self, x: SemidirectElement) -> galois.FieldArray:
        tensor = np.concatenate([f.dense() for f in x.tensor])
        tail = as_ints(self.ambient.tail_coordinates(x.tail))
        return self.field(np.concatenate([tensor, tail]) % self.ambient.shape.p)

    def zero(self) -> SemidirectElement:
        return SemidirectElement.zero(self.ambient)


@realization_for.register
def _(x: SemidirectElement) -> Realization:
    return x.ambient.realization


@conjugate.register
def _(x: SemidirectElement, sigma: TruncatedAutomorphism) -> SemidirectElement:
    """Id_S x sigma on the tensor part, conjugation on the tail."""
    tail = truncated_conjugate(sigma, x.tail)
    if not x.ambient.contains_tail(tail):
        logger.error(f"Conjugated tail {tail!r} left D")
        raise InvalidAutomorphismError("Automorphism does not preserve D")
    return SemidirectElement(x.ambient, [sigma.apply(f) for f in x.tensor], tail)


def random_element(ambient: SemidirectProduct, rng: np.random.Generator, density: float = 1.0,
                   tail: Optional[DerivationElement] = None) -> SemidirectElement:
    """Uniform coefficients (each kept with probability ``density``); a given tail overrides the random one."""
    p, shape = ambient.shape.p, ambient.shape
    tensor = []
    for _ in range(ambient.salg.dim):
        values = rng.integers(0, p, size=shape.dim)
        mask = rng.random(shape.dim) < density
        tensor.append(DPElement.from_dense(shape, values * mask))
    if tail is None:
        coords = rng.integers(0, p, size=len(ambient.tail_basis))
        tail = DerivationElement.zero(shape)
        for c, d in zip(coords, ambient.tail_basis):
            if c and rng.random() < density:
                tail = tail + d.scale(int(c))
    return SemidirectElement(ambient, tensor, tail)


def tensor_sum(ambient: SemidirectProduct, terms: Iterable[Tuple[Sequence[int], DPElement]]) -> SemidirectElement:
    """sum of s x f over (s, f) pairs."""
    total = SemidirectElement.zero(ambient)
    for s, f in terms:
        total = total + SemidirectElement.pure(ambient, s, f)
    return total

"""
Divided Power Algebra
=====================

O(m;n): the commutative algebra spanned by x^(a), 0 <= a_i < p^{n_i}, with
x_i^(r) x_i^(s) = C(r+s, r) x_i^(r+s). Elements are sparse maps from
exponent tuples to residues of the prime field; products of dense operands go
through per-shape multiplication tables built with numpy.
"""

import itertools
import math
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from src.scalars import FieldSpec, binom_mod_p, ext_field_make, factorial_mod_p
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MultiIndex = Tuple[int, ...]

# Operand sizes above which products use the dense table
SPARSE_PRODUCT_LIMIT = 64
DENSE_TABLE_LIMIT = 1024


class ShapeMismatchError(ValueError):
    """Operands live in different divided power algebras."""


class NotAUnitError(ArithmeticError):
    """Element has zero constant term."""


class ZeroElementError(ValueError):
    """The zero element has no (finite) degree."""


@dataclass(frozen=True)
class AlgebraShape:
    """Shape of O(m;n) over a fixed field, with an optional DegLex split index."""

    m: int
    n: Tuple[int, ...]
    field: FieldSpec
    split: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(h) for h in self.n))
        if self.m < 1 or len(self.n) != self.m:
            raise ValueError(f"Need m >= 1 heights, got m={self.m}, n={self.n}")
        if any(h < 1 for h in self.n):
            raise ValueError(f"Heights must be >= 1, got {self.n}")
        if self.split is not None and not 1 <= self.split <= self.m:
            raise ValueError(f"Split index {self.split} outside 1..{self.m}")

    @classmethod
    def truncated(cls, field, m: int, split: Optional[int] = None) -> "AlgebraShape":
        """O(m;1)."""
        return cls(m, (1,) * m, _as_field(field), split)

    @classmethod
    def one_variable(cls, field, n: int) -> "AlgebraShape":
        """O(1;n)."""
        return cls(1, (n,), _as_field(field))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def bounds(self) -> Tuple[int, ...]:
        return tuple(self.p**h for h in self.n)

    @property
    def dim(self) -> int:
        return math.prod(self.bounds)

    @property
    def strides(self) -> Tuple[int, ...]:
        strides, acc = [], 1
        for bound in self.bounds:
            strides.append(acc)
            acc *= bound
        return tuple(strides)

    @property
    def top(self) -> MultiIndex:
        return tuple(b - 1 for b in self.bounds)

    def with_split(self, s: Optional[int]) -> "AlgebraShape":
        return replace(self, split=s)

    def is_truncated(self) -> bool:
        return all(h == 1 for h in self.n)

    def rank(self, a: MultiIndex) -> int:
        return sum(ai * stride for ai, stride in zip(a, self.strides))

    def unrank(self, r: int) -> MultiIndex:
        return monomials(self)[r]

    def contains_index(self, a: MultiIndex) -> bool:
        return len(a) == self.m and all(0 <= ai < b for ai, b in zip(a, self.bounds))

    def unit_vector(self, i: int) -> MultiIndex:
        return tuple(1 if j == i else 0 for j in range(self.m))

    def serialize(self) -> str:
        text = f"O(p={self.p};M={self.field.M};irr={','.join(map(str, self.field.irr))};n={','.join(map(str, self.n))}"
        if self.split is not None:
            text += f";s={self.split}"
        return text + ")"

    @classmethod
    def parse(cls, text: str) -> "AlgebraShape":
        match = re.fullmatch(r"\s*O\((.*)\)\s*", text)
        if not match:
            raise ValueError(f"Malformed shape {text!r}")
        fields = dict(part.split("=", 1) for part in match.group(1).split(";"))
        spec = FieldSpec(int(fields["p"]), int(fields.get("M", 1)), tuple(int(c) for c in fields["irr"].split(",")))
        heights = tuple(int(h) for h in fields["n"].split(","))
        split = int(fields["s"]) if "s" in fields else None
        return cls(len(heights), heights, spec, split)

    def __repr__(self):
        heights = ",".join(map(str, self.n))
        return f"O({self.m};({heights}))/F{self.field.q}"


def _as_field(field) -> FieldSpec:
    return field if isinstance(field, FieldSpec) else ext_field_make(int(field))


@lru_cache(maxsize=None)
def monomials(shape: AlgebraShape) -> Tuple[MultiIndex, ...]:
    """All exponent tuples in rank order (first variable varies fastest)."""
    ranges = [range(b) for b in reversed(shape.bounds)]
    return tuple(tuple(reversed(a)) for a in itertools.product(*ranges))


@lru_cache(maxsize=None)
def _exponent_array(shape: AlgebraShape) -> np.ndarray:
    return np.array(monomials(shape), dtype=np.int64).reshape(shape.dim, shape.m)


@lru_cache(maxsize=None)
def _binomial_table(p: int, bound: int) -> np.ndarray:
    """T[s, a] = C(s, a) mod p for s < 2 * bound, a < bound."""
    table = np.zeros((2 * bound, bound), dtype=np.int64)
    for s in range(2 * bound):
        for a in range(min(s, bound - 1) + 1):
            table[s, a] = binom_mod_p(s, a, p)
    return table


@lru_cache(maxsize=8)
def product_table(shape: AlgebraShape) -> Tuple[np.ndarray, np.ndarray]:
    """
    Dense structure of the product on monomials.

    Returns (target, coeff), both dim x dim: x^(a) x^(b) = coeff[a, b] x^(target[a, b]),
    where target == dim marks a vanishing product.
    """
    if shape.dim > DENSE_TABLE_LIMIT:
        raise ValueError(f"No dense product table for dim {shape.dim}")
    logger.debug(f"Building product table for {shape!r}")
    exps = _exponent_array(shape)
    dim = shape.dim
    target = np.zeros((dim, dim), dtype=np.int64)
    coeff = np.ones((dim, dim), dtype=np.int64)
    valid = np.ones((dim, dim), dtype=bool)
    for i, (bound, stride) in enumerate(zip(shape.bounds, shape.strides)):
        a = exps[:, i][:, None]
        b = exps[:, i][None, :]
        total = a + b
        valid &= total < bound
        table = _binomial_table(shape.p, bound)
        coeff = coeff * table[total, np.broadcast_to(a, total.shape)] % shape.p
        target += total * stride
    valid &= coeff != 0
    target[~valid] = dim
    coeff[~valid] = 0
    return target, coeff


def _pair_coefficient(shape: AlgebraShape, a: MultiIndex, b: MultiIndex) -> Tuple[Optional[MultiIndex], int]:
    coeff = 1
    total = []
    for ai, bi, bound in zip(a, b, shape.bounds):
        s = ai + bi
        if s >= bound:
            return None, 0
        coeff = coeff * binom_mod_p(s, ai, shape.p) % shape.p
        if coeff == 0:
            return None, 0
        total.append(s)
    return tuple(total), coeff


class DPElement:
    """
    Element of O(m;n): a sparse map exponent tuple -> nonzero residue mod p.

    Values are treated as immutable; every operation returns a new element.
    """

    __slots__ = ("shape", "terms")

    def __init__(self, shape: AlgebraShape, terms: Optional[Mapping[MultiIndex, int]] = None, check: bool = True):
        self.shape = shape
        if terms is None:
            self.terms: Dict[MultiIndex, int] = {}
        elif check:
            p = shape.p
            clean = {}
            for a, c in terms.items():
                a = tuple(int(ai) for ai in a)
                if not shape.contains_index(a):
                    raise ValueError(f"Exponent {a} outside {shape!r}")
                c = int(c) % p
                if c:
                    clean[a] = c
            self.terms = clean
        else:
            self.terms = dict(terms)

    # construction

    @classmethod
    def zero(cls, shape: AlgebraShape) -> "DPElement":
        return cls(shape, {}, check=False)

    @classmethod
    def constant(cls, shape: AlgebraShape, c: int = 1) -> "DPElement":
        return cls(shape, {(0,) * shape.m: c})

    @classmethod
    def one(cls, shape: AlgebraShape) -> "DPElement":
        return cls.constant(shape, 1)

    @classmethod
    def monomial(cls, shape: AlgebraShape, a: MultiIndex, c: int = 1) -> "DPElement":
        return cls(shape, {tuple(a): c})

    @classmethod
    def variable(cls, shape: AlgebraShape, i: int, c: int = 1) -> "DPElement":
        """c * x_{i+1} (0-based variable index)."""
        return cls.monomial(shape, shape.unit_vector(i), c)

    @classmethod
    def from_dense(cls, shape: AlgebraShape, vector: Iterable[int]) -> "DPElement":
        values = np.asarray(vector, dtype=np.int64) % shape.p
        basis = monomials(shape)
        return cls(shape, {basis[r]: int(values[r]) for r in np.flatnonzero(values)}, check=False)

    # inspection

    def dense(self) -> np.ndarray:
        vector = np.zeros(self.shape.dim, dtype=np.int64)
        for a, c in self.terms.items():
            vector[self.shape.rank(a)] = c
        return vector

    def coefficient(self, a: MultiIndex) -> int:
        return self.terms.get(tuple(a), 0)

    @property
    def constant_term(self) -> int:
        return self.terms.get((0,) * self.shape.m, 0)

    def support(self) -> List[MultiIndex]:
        return sorted(self.terms, key=self.shape.rank)

    def items(self) -> Iterator[Tuple[MultiIndex, int]]:
        for a in self.support():
            yield a, self.terms[a]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def involves(self, i: int) -> bool:
        """Whether variable x_{i+1} occurs in the support."""
        return any(a[i] for a in self.terms)

    # arithmetic

    def _check(self, other: "DPElement"):
        if not isinstance(other, DPElement) or other.shape != self.shape:
            raise ShapeMismatchError(f"Shape mismatch: {self.shape!r} vs {getattr(other, 'shape', other)!r}")

    def __add__(self, other: "DPElement") -> "DPElement":
        self._check(other)
        p = self.shape.p
        terms = dict(self.terms)
        for a, c in other.terms.items():
            value = (terms.get(a, 0) + c) % p
            if value:
                terms[a] = value
            else:
                terms.pop(a, None)
        return DPElement(self.shape, terms, check=False)

    def __neg__(self) -> "DPElement":
        p = self.shape.p
        return DPElement(self.shape, {a: p - c for a, c in self.terms.items()}, check=False)

    def __sub__(self, other: "DPElement") -> "DPElement":
        return self + (-other)

    def scale(self, c: int) -> "DPElement":
        c = int(c) % self.shape.p
        if c == 0:
            return DPElement.zero(self.shape)
        p = self.shape.p
        return DPElement(self.shape, {a: v * c % p for a, v in self.terms.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, DPElement):
            return dp_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, DPElement) and self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    # text

    def serialize(self) -> str:
        body = ",".join(f"{self.shape.rank(a)}:{c}" for a, c in self.items())
        return f"{self.shape.serialize()}|{body}"

    @classmethod
    def parse(cls, text: str, shape: Optional[AlgebraShape] = None) -> "DPElement":
        head, _, body = text.strip().rpartition("|")
        if head:
            shape = AlgebraShape.parse(head)
        if shape is None:
            raise ValueError(f"No shape given for {text!r}")
        terms = {}
        for item in filter(None, body.split(",")):
            rank, coeff = item.split(":")
            terms[shape.unrank(int(rank))] = int(coeff)
        return cls(shape, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.items():
            if not any(a):
                parts.append(str(c))
                continue
            mono = "*".join(f"x{i + 1}^({ai})" for i, ai in enumerate(a) if ai)
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def _check_shapes(f: DPElement, g: DPElement):
    if f.shape != g.shape:
        raise ShapeMismatchError(f"Shape mismatch: {f.shape!r} vs {g.shape!r}")


def dp_mul(f: DPElement, g: DPElement) -> DPElement:
    """Product in O(m;n); monomial products beyond the height bounds vanish."""
    _check_shapes(f, g)
    shape = f.shape
    if not f.terms or not g.terms:
        return DPElement.zero(shape)
    if len(f.terms) * len(g.terms) <= SPARSE_PRODUCT_LIMIT or shape.dim > DENSE_TABLE_LIMIT:
        p = shape.p
        terms: Dict[MultiIndex, int] = {}
        for a, c in f.terms.items():
            for b, d in g.terms.items():
                target, coeff = _pair_coefficient(shape, a, b)
                if target is None:
                    continue
                terms[target] = (terms.get(target, 0) + c * d * coeff) % p
        return DPElement(shape, {a: c for a, c in terms.items() if c}, check=False)
    return DPElement.from_dense(shape, _dense_product(shape, f.dense(), g.dense()))


def _dense_product(shape: AlgebraShape, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    target, coeff = product_table(shape)
    p, dim = shape.p, shape.dim
    fi, gi = np.flatnonzero(left), np.flatnonzero(right)
    if fi.size == 0 or gi.size == 0:
        return np.zeros(dim, dtype=np.int64)
    block = np.ix_(fi, gi)
    values = (np.outer(left[fi], right[gi]) % p) * coeff[block] % p
    sums = np.bincount(target[block].ravel(), weights=values.ravel().astype(np.float64), minlength=dim + 1)
    return np.rint(sums[:dim]).astype(np.int64) % p


def multiplication_matrix(f: DPElement) -> np.ndarray:
    """Integer matrix of g -> f*g on the monomial basis (columns = inputs)."""
    shape = f.shape
    dim = shape.dim
    matrix = np.zeros((dim + 1, dim), dtype=np.int64)
    if shape.dim <= DENSE_TABLE_LIMIT:
        target, coeff = product_table(shape)
        columns = np.arange(dim)
        for a, c in f.terms.items():
            r = shape.rank(a)
            np.add.at(matrix, (target[r], columns), coeff[r] * c)
    else:
        basis = monomials(shape)
        for col, b in enumerate(basis):
            for a, c in f.terms.items():
                t, coeff = _pair_coefficient(shape, a, b)
                if t is not None:
                    matrix[shape.rank(t), col] += c * coeff
    return matrix[:dim] % shape.p


@lru_cache(maxsize=None)
def partial_matrix(shape: AlgebraShape, i: int) -> np.ndarray:
    """Integer matrix of the special derivation d_i: x^(a) -> x^(a - e_i)."""
    dim = shape.dim
    matrix = np.zeros((dim, dim), dtype=np.int64)
    stride = shape.strides[i]
    for col, a in enumerate(monomials(shape)):
        if a[i]:
            matrix[col - stride, col] = 1
    return matrix


def dp_partial(f: DPElement, i: int) -> DPElement:
    """The special derivation d_i (0-based): x^(a) -> x^(a - e_i)."""
    terms = {}
    for a, c in f.terms.items():
        if a[i]:
            b = list(a)
            b[i] -= 1
            terms[tuple(b)] = c
    return DPElement(f.shape, terms, check=False)


def dp_power(f: DPElement, k: int) -> DPElement:
    """Ordinary k-th power."""
    result = DPElement.one(f.shape)
    for _ in range(k):
        result = dp_mul(result, f)
    return result


def ordinary_monomial(shape: AlgebraShape, exponents: MultiIndex, c: int = 1) -> DPElement:
    """c * x_1^{a_1} ... x_m^{a_m} in ordinary powers, i.e. c * a! * x^(a)."""
    coeff = c
    for ai in exponents:
        coeff = coeff * factorial_mod_p(ai, shape.p) % shape.p
    return DPElement.monomial(shape, tuple(exponents), coeff)


@lru_cache(maxsize=None)
def _divided_power_ratio(l: int, s: int, p: int) -> int:
    """(ls)! / (l! (s!)^l) mod p, evaluated in exact integers."""
    return (math.factorial(l * s) // (math.factorial(l) * math.factorial(s) ** l)) % p


@lru_cache(maxsize=None)
def _shift_coefficients(p: int, dim: int, k: int) -> np.ndarray:
    return np.array([binom_mod_p(a + k, k, p) for a in range(dim - k)], dtype=np.int64)


def dp_divided_power(f: DPElement, r: int) -> DPElement:
    """
    f^(r) for f in the maximal ideal of O(1;n).

    The terms c x^(s) of f are peeled off one at a time with
    (t + g)^(r) = sum_l t^(l) g^(r-l) and (c x^(s))^(l) = c^l ((ls)!/(l!(s!)^l)) x^(ls);
    every power of the remaining sum up to r is kept as a dense vector.
    """
    shape = f.shape
    if shape.m != 1:
        raise ValueError(f"Divided powers are implemented on O(1;n) only, got {shape!r}")
    if f.constant_term:
        raise ValueError("Divided powers need an element of the maximal ideal")
    if r < 0:
        raise ValueError(f"Negative order {r}")
    if r == 0:
        return DPElement.one(shape)
    if r == 1:
        return f
    p, dim = shape.p, shape.dim
    if r >= dim or f.is_zero():
        return DPElement.zero(shape)

    unit = np.zeros(dim, dtype=np.int64)
    unit[0] = 1
    powers: Dict[int, np.ndarray] = {0: unit}
    for (s,), c in sorted(f.terms.items(), reverse=True):
        current: Dict[int, np.ndarray] = {}
        for order in range(r + 1):
            acc = np.zeros(dim, dtype=np.int64)
            touched = False
            for l in range(order + 1):
                shift = l * s
                if shift >= dim:
                    break
                rest = powers.get(order - l)
                if rest is None:
                    continue
                weight = pow(c, l, p) * _divided_power_ratio(l, s, p) % p
                if weight == 0:
                    continue
                acc[shift:] += weight * rest[: dim - shift] * _shift_coefficients(p, dim, shift) % p
                touched = True
            if touched:
                acc %= p
                if acc.any():
                    current[order] = acc
        powers = current
    return DPElement.from_dense(shape, powers.get(r, np.zeros(dim, dtype=np.int64)))


def dp_filtration_degree(f: DPElement) -> int:
    """Lowest standard degree |a| in the support."""
    if f.is_zero():
        raise ZeroElementError("The zero element has no filtration degree")
    return min(sum(a) for a in f.terms)


def dp_infinite_degree(f: DPElement) -> float:
    """Filtration degree with the zero element mapped to infinity."""
    return math.inf if f.is_zero() else dp_filtration_degree(f)


def dp_inverse(f: DPElement) -> DPElement:
    """Inverse of a unit by the Neumann series c^{-1} sum (-n)^k, n = f/c - 1 nilpotent."""
    c = f.constant_term
    if c == 0:
        raise NotAUnitError(f"{f!r} is not a unit (zero constant term)")
    shape = f.shape
    p = shape.p
    c_inv = pow(c, -1, p)
    nilpotent = f.scale(c_inv) - DPElement.one(shape)
    step = -nilpotent
    term = DPElement.one(shape)
    total = DPElement.one(shape)
    for _ in range(shape.dim):
        term = dp_mul(term, step)
        if term.is_zero():
            break
        total = total + term
    return total.scale(c_inv)


def dp_embed(f: DPElement, target: AlgebraShape, offset: int = 0) -> DPElement:
    """Place the variables of f at positions offset.. of a larger shape."""
    pad_left = (0,) * offset
    pad_right = (0,) * (target.m - offset - f.shape.m)
    return DPElement(target, {pad_left + a + pad_right: c for a, c in f.terms.items()})


def dp_restrict(f: DPElement, target: AlgebraShape, offset: int = 0) -> DPElement:
    """Inverse of ``dp_embed``; fails if f involves variables outside the window."""
    window = range(offset, offset + target.m)
    terms = {}
    for a, c in f.terms.items():
        if any(ai for i, ai in enumerate(a) if i not in window):
            raise ValueError(f"{f!r} involves variables outside positions {offset}..{offset + target.m - 1}")
        terms[a[offset : offset + target.m]] = c
    return DPElement(target, terms)

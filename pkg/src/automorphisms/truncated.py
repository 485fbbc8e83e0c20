"""
Automorphisms of O(m;1)
=======================

An automorphism of the truncated polynomial ring is fixed by the images
f_i = sigma(x_i), which must lie in the maximal ideal with an invertible
linear part. Monomials go to products of divided powers of the images,
sigma(x^(a)) = prod_i f_i^{a_i} / a_i!, and a derivation D is conjugated to
D^sigma = sigma o D o sigma^{-1}.

The inverse is found by fixed-point iteration on filtration degree: starting
from the inverse linear substitution, each correction step
y <- y - L^{-1}(f(y) - x) gains one degree, so at most m(p-1) steps are needed.
"""

from functools import singledispatch
from typing import Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.automorphisms.errors import InvalidAutomorphismError
from src.cartan_algebras import DerivationElement, witt_apply
from src.divided_power import AlgebraShape, DPElement, dp_mul, monomials
from src.utils.linalg import as_ints, rank
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def _inverse_factorials(p: int) -> List[int]:
    values, acc = [1], 1
    for k in range(1, p):
        acc = acc * k % p
        values.append(pow(acc, -1, p))
    return values


class TruncatedAutomorphism:
    """sigma in Aut O(m;1), given by the images of x_1, ..., x_m."""

    __slots__ = ("shape", "images", "_powers", "_inverse_images")

    def __init__(self, shape: AlgebraShape, images: Sequence[DPElement], check: bool = True):
        if not shape.is_truncated():
            raise InvalidAutomorphismError(f"Substitution automorphisms need O(m;1), got {shape!r}")
        images = tuple(images)
        if len(images) != shape.m:
            raise InvalidAutomorphismError(f"Expected {shape.m} images, got {len(images)}")
        self.shape = shape
        self.images: Tuple[DPElement, ...] = images
        self._powers: Optional[List[List[DPElement]]] = None
        self._inverse_images: Optional[Tuple[DPElement, ...]] = None
        if check:
            self.validate()

    @classmethod
    def identity(cls, shape: AlgebraShape) -> "TruncatedAutomorphism":
        return cls(shape, [DPElement.variable(shape, i) for i in range(shape.m)], check=False)

    def linear_part(self) -> np.ndarray:
        """L[i, j] = coefficient of x_{j+1} in sigma(x_{i+1})."""
        m = self.shape.m
        return np.array(
            [[f.coefficient(self.shape.unit_vector(j)) for j in range(m)] for f in self.images], dtype=np.int64
        )

    def validate(self):
        for i, f in enumerate(self.images):
            if f.shape != self.shape:
                raise InvalidAutomorphismError(f"Image of x{i + 1} lives in {f.shape!r}, not {self.shape!r}")
            if f.constant_term:
                raise InvalidAutomorphismError(f"Image of x{i + 1} is not in the maximal ideal: {f!r}")
        field = self.shape.field.prime_field
        if rank(field(self.linear_part())) < self.shape.m:
            logger.error(f"Singular Jacobian for images {self.images}")
            raise InvalidAutomorphismError("Jacobian determinant is not a unit")

    def is_identity(self) -> bool:
        return all(f == DPElement.variable(self.shape, i) for i, f in enumerate(self.images))

    # action on O(m;1)

    def _divided_images(self) -> List[List[DPElement]]:
        """powers[i][k] = f_i^k / k! for k < p."""
        if self._powers is None:
            p = self.shape.p
            inverse = _inverse_factorials(p)
            powers = []
            for f in self.images:
                row, current = [DPElement.one(self.shape)], DPElement.one(self.shape)
                for k in range(1, p):
                    current = dp_mul(current, f)
                    row.append(current.scale(inverse[k]))
                powers.append(row)
            self._powers = powers
        return self._powers

    def apply(self, f: DPElement) -> DPElement:
        """sigma(f)."""
        if f.shape != self.shape:
            raise InvalidAutomorphismError(f"{f.shape!r} is not the domain {self.shape!r}")
        powers = self._divided_images()
        result = DPElement.zero(self.shape)
        for a, c in f.items():
            term = DPElement.constant(self.shape, c)
            for i, ai in enumerate(a):
                if ai:
                    term = dp_mul(term, powers[i][ai])
                    if term.is_zero():
                        break
            result = result + term
        return result

    def __call__(self, x):
        return conjugate(x, self)

    def operator(self) -> galois.FieldArray:
        """Matrix of sigma on the monomial basis (columns are images)."""
        field = self.shape.field.prime_field
        columns = [self.apply(DPElement.monomial(self.shape, a)).dense() for a in monomials(self.shape)]
        return field(np.column_stack(columns))

    # group structure

    def compose(self, other: "TruncatedAutomorphism") -> "TruncatedAutomorphism":
        """self o other: x_i -> self(other(x_i))."""
        if other.shape != self.shape:
            raise InvalidAutomorphismError("Composition of automorphisms of different algebras")
        return TruncatedAutomorphism(self.shape, [self.apply(g) for g in other.images], check=False)

    def inverse_images(self) -> Tuple[DPElement, ...]:
        """sigma^{-1}(x_1), ..., sigma^{-1}(x_m)."""
        if self._inverse_images is None:
            self._inverse_images = self._solve_inverse()
        return self._inverse_images

    def inverse(self) -> "TruncatedAutomorphism":
        return TruncatedAutomorphism(self.shape, self.inverse_images(), check=False)

    def _solve_inverse(self) -> Tuple[DPElement, ...]:
        shape, m, p = self.shape, self.shape.m, self.shape.p
        field = shape.field.prime_field
        linv = as_ints(np.linalg.inv(field(self.linear_part())))
        variables = [DPElement.variable(shape, i) for i in range(m)]

        def mix(vectors: Sequence[DPElement]) -> List[DPElement]:
            out = []
            for k in range(m):
                total = DPElement.zero(shape)
                for i in range(m):
                    if linv[k, i]:
                        total = total + vectors[i].scale(int(linv[k, i]))
                out.append(total)
            return out

        guess = mix(variables)
        for step in range(m * (p - 1) + 2):
            substitution = TruncatedAutomorphism(shape, guess, check=False)
            residual = [substitution.apply(f) - x for f, x in zip(self.images, variables)]
            if all(r.is_zero() for r in residual):
                logger.debug(f"Inverse found after {step} correction steps")
                return tuple(guess)
            guess = [y - c for y, c in zip(guess, mix(residual))]
        raise ArithmeticError("Inverse iteration did not converge")

    def __eq__(self, other):
        return isinstance(other, TruncatedAutomorphism) and self.shape == other.shape and self.images == other.images

    def __hash__(self):
        return hash((self.shape, self.images))

    def __repr__(self):
        body = ", ".join(f"x{i + 1} -> {f!r}" for i, f in enumerate(self.images))
        return f"TruncatedAutomorphism({body})"


def truncated_conjugate(sigma: TruncatedAutomorphism, D: DerivationElement) -> DerivationElement:
    """D^sigma = sigma o D o sigma^{-1}: the d_j coefficient is sigma(D(sigma^{-1}(x_j)))."""
    if D.shape != sigma.shape:
        raise InvalidAutomorphismError(f"{D.shape!r} is not the domain {sigma.shape!r}")
    coeffs = [sigma.apply(witt_apply(D, y)) for y in sigma.inverse_images()]
    return DerivationElement(D.shape, coeffs)


@singledispatch
def conjugate(x, sigma: TruncatedAutomorphism):
    """Action of an automorphism of O(m;1) on an element built over O(m;1)."""
    raise TypeError(f"Automorphisms of O(m;1) do not act on {type(x).__name__}")


@conjugate.register
def _(x: DPElement, sigma: TruncatedAutomorphism) -> DPElement:
    return sigma.apply(x)


@conjugate.register
def _(x: DerivationElement, sigma: TruncatedAutomorphism) -> DerivationElement:
    return truncated_conjugate(sigma, x)


def substitution_images(shape: AlgebraShape, changes: Dict[int, DPElement]) -> List[DPElement]:
    """Images of x_1..x_m with x_{i+1} replaced by ``changes[i]`` (0-based keys)."""
    return [changes.get(i, DPElement.variable(shape, i)) for i in range(shape.m)]

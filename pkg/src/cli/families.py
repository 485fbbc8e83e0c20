"""
Algebra Families
================

One handle per CLI family. A handle knows its dimension and closed-form
dimension, its grading bounds, how to turn a coefficient vector over F_p into
an element, how to (de)serialize elements, and the two nilpotency routes the
counting command compares:

    witt                 W(m;n); criterion psi_i(x) = 0 with (e, s) = (0, m)
    zassenhaus-envelope  W(1;n)_p; criterion psi_i(x) = 0 with e = s = n
    sl2-semidirect       sl_2 x O(1;1) x| k d; the s_0 criterion

Handles are cached per parameter tuple so that worker processes rebuild each
algebra once.
"""

from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.cartan_algebras import (
    DerivationElement,
    regular_nilpotent_derivation,
    witt_basis,
    witt_dimension,
)
from src.cartan_algebras.special import span_dimension
from src.divided_power import AlgebraShape, DPElement, monomials
from src.restricted import is_nilpotent, p_closure, psi_relation
from src.scalars import ext_field_make
from src.semidirect import SemidirectElement, nilpotency_criterion, semi_is_nilpotent, sl2_line
from src.utils.logging_config import get_logger
from src.zassenhaus import (
    PEnvelopeElement,
    classify_nilpotent,
    conjugate_of_partial,
    lp_realization,
)

logger = get_logger(__name__)

CONSTRAINTS = ("any", "nilpotent", "regular-nilpotent", "singular-nilpotent")

FamilyKey = Tuple[str, int, int, Tuple[int, ...]]


class AlgebraFamily(ABC):
    """An algebra of one CLI family with its F_p-coordinates."""

    name: str = ""
    constraints: Tuple[str, ...] = ("any", "nilpotent")

    def __init__(self, p: int, M: int, heights: Tuple[int, ...]):
        self.p = p
        self.M = M
        self.heights = tuple(heights)
        self.field = ext_field_make(p, 1)

    @property
    def key(self) -> FamilyKey:
        return (self.name, self.p, self.M, self.heights)

    @property
    @abstractmethod
    def size(self) -> int:
        """Number of F_p coordinates of an element."""

    @abstractmethod
    def dimension(self) -> int:
        """Dimension computed from the realization."""

    @abstractmethod
    def expected_dimension(self) -> int:
        """Closed-form dimension."""

    @abstractmethod
    def grading_bounds(self) -> Tuple[int, int]:
        ...

    @abstractmethod
    def element(self, coords: Sequence[int]):
        """sum_i coords[i] b_i over the coordinate basis."""

    @abstractmethod
    def parse(self, text: str):
        ...

    @abstractmethod
    def criterion(self, x) -> Optional[bool]:
        """Structural nilpotency verdict; None when undecided."""

    @abstractmethod
    def propose(self, rng: np.random.Generator, constraint: str):
        """A candidate for rejection sampling under ``constraint``."""

    def serialize(self, x) -> str:
        return x.serialize()

    def is_nilpotent(self, x) -> bool:
        return is_nilpotent(x)

    def uniform(self, rng: np.random.Generator):
        return self.element(rng.integers(0, self.p, size=self.size))

    def satisfies(self, x, constraint: str) -> bool:
        if constraint == "any":
            return True
        if constraint == "nilpotent":
            return self.is_nilpotent(x)
        raise ValueError(f"Constraint {constraint!r} is not supported for {self.name}")

    def label(self) -> str:
        return self.name

    def summary(self) -> Dict[str, object]:
        dimension, expected = self.dimension(), self.expected_dimension()
        low, high = self.grading_bounds()
        return {
            "family": self.name,
            "algebra": self.label(),
            "p": self.p,
            "dimension": dimension,
            "expected_dimension": expected,
            "dimension_matches": dimension == expected,
            "grading_min": low,
            "grading_max": high,
        }


class WittFamily(AlgebraFamily):
    """W(m;n) acting on O(m;n)."""

    name = "witt"

    def __init__(self, p: int, M: int, heights: Tuple[int, ...]):
        super().__init__(p, M, heights)
        self.shape = AlgebraShape(len(heights), heights, self.field)

    @property
    def size(self) -> int:
        return witt_dimension(self.shape)

    def label(self) -> str:
        return f"W({self.shape.m};({','.join(map(str, self.heights))}))"

    def dimension(self) -> int:
        return span_dimension(witt_basis(self.shape), self.shape)

    def expected_dimension(self) -> int:
        return witt_dimension(self.shape)

    def grading_bounds(self) -> Tuple[int, int]:
        return -1, sum(self.shape.top) - 1

    def element(self, coords: Sequence[int]) -> DerivationElement:
        return DerivationElement.from_dense(self.shape, np.asarray(coords, dtype=np.int64) % self.p)

    def parse(self, text: str) -> DerivationElement:
        D = DerivationElement.parse(text)
        if D.shape.with_split(None) != self.shape:
            raise ValueError(f"Element lives in {D.shape!r}, not {self.shape!r}")
        return DerivationElement(self.shape, [DPElement(self.shape, f.terms) for f in D.coeffs])

    def criterion(self, x: DerivationElement) -> Optional[bool]:
        if not self.shape.is_truncated():
            return None
        return psi_relation(x, e=0, s=self.shape.m).vanishes()

    def propose(self, rng: np.random.Generator, constraint: str) -> DerivationElement:
        if constraint == "any" or rng.random() < 0.5:
            return self.uniform(rng)
        # W_(1) raises the degree, so these candidates are nilpotent
        shape = self.shape
        lifted = [a for a in monomials(shape) if sum(a) >= 2]
        coeffs = []
        for _ in range(shape.m):
            terms = {a: int(rng.integers(1, self.p)) for a in lifted if rng.random() < 0.3}
            coeffs.append(DPElement(shape, terms))
        candidate = DerivationElement(shape, coeffs)
        if shape.is_truncated() and rng.random() < 0.5:
            candidate = candidate + regular_nilpotent_derivation(shape)
        return candidate


class EnvelopeFamily(AlgebraFamily):
    """W(1;n)_p = W(1;n) + span{d^{p^i}}."""

    name = "zassenhaus-envelope"
    constraints = CONSTRAINTS

    def __init__(self, p: int, M: int, heights: Tuple[int, ...]):
        super().__init__(p, M, heights)
        self.n = heights[0]
        self.shape = AlgebraShape.one_variable(self.field, self.n)
        self.realization = lp_realization(self.shape)

    @property
    def size(self) -> int:
        return self.shape.dim + self.n - 1

    def label(self) -> str:
        return f"W(1;{self.n})_p"

    def dimension(self) -> int:
        """Dimension of the p-closure of W(1;n) inside Der O(1;n)."""
        closure = p_closure(witt_basis(self.shape), family="witt-envelope")
        return closure.dimension()

    def expected_dimension(self) -> int:
        return self.p**self.n + self.n - 1

    def grading_bounds(self) -> Tuple[int, int]:
        return -(self.p ** (self.n - 1)), self.shape.dim - 2

    def element(self, coords: Sequence[int]) -> PEnvelopeElement:
        coords = np.asarray(coords, dtype=np.int64) % self.p
        dim = self.shape.dim
        return PEnvelopeElement(self.shape, DPElement.from_dense(self.shape, coords[:dim]),
                                [int(c) for c in coords[dim:]])

    def parse(self, text: str) -> PEnvelopeElement:
        return PEnvelopeElement.parse(text, self.shape)

    def criterion(self, x: PEnvelopeElement) -> Optional[bool]:
        return psi_relation(x, e=self.n, s=self.n).vanishes()

    def satisfies(self, x: PEnvelopeElement, constraint: str) -> bool:
        if constraint in ("regular-nilpotent", "singular-nilpotent"):
            if not self.is_nilpotent(x):
                return False
            regular = classify_nilpotent(x).regular
            return regular if constraint == "regular-nilpotent" else not regular
        return super().satisfies(x, constraint)

    def propose(self, rng: np.random.Generator, constraint: str) -> PEnvelopeElement:
        if constraint == "any" or rng.random() < 0.25:
            return self.uniform(rng)
        shape, p = self.shape, self.p
        if constraint == "regular-nilpotent" or (constraint == "nilpotent" and rng.random() < 0.5):
            alphas = [int(c) for c in rng.integers(0, p, size=self.n - 1)]
            return conjugate_of_partial(shape, rng, alphas)
        # elements of L_(1) raise the degree and are singular nilpotent
        terms = {(a,): int(rng.integers(1, p)) for a in range(2, shape.dim) if rng.random() < 0.3}
        return PEnvelopeElement(shape, DPElement(shape, terms))


class SemidirectFamily(AlgebraFamily):
    """g = sl_2 x O(1;1) x| k d, dimension 3p + 1."""

    name = "sl2-semidirect"

    def __init__(self, p: int, M: int, heights: Tuple[int, ...]):
        super().__init__(p, M, heights)
        self.ambient = sl2_line(self.field)
        self.shape = self.ambient.shape

    @property
    def size(self) -> int:
        return self.ambient.salg.dim * self.shape.dim + len(self.ambient.tail_basis)

    def label(self) -> str:
        return self.ambient.name

    def dimension(self) -> int:
        return len(self.ambient.realization.basis())

    def expected_dimension(self) -> int:
        return 3 * self.p + 1

    def grading_bounds(self) -> Tuple[int, int]:
        return -1, self.p - 1

    def element(self, coords: Sequence[int]) -> SemidirectElement:
        coords = np.asarray(coords, dtype=np.int64) % self.p
        P, salg = self.shape.dim, self.ambient.salg
        tensor = [DPElement.from_dense(self.shape, coords[i * P:(i + 1) * P]) for i in range(salg.dim)]
        tail = DerivationElement.zero(self.shape)
        for c, d in zip(coords[salg.dim * P:], self.ambient.tail_basis):
            if c:
                tail = tail + d.scale(int(c))
        return SemidirectElement(self.ambient, tensor, tail)

    def parse(self, text: str) -> SemidirectElement:
        return SemidirectElement.parse(text, self.ambient)

    def satisfies(self, x: SemidirectElement, constraint: str) -> bool:
        if constraint == "nilpotent":
            # raises ConsistencyError when the two verdicts disagree
            return semi_is_nilpotent(x).direct
        return super().satisfies(x, constraint)

    def criterion(self, x: SemidirectElement) -> Optional[bool]:
        return nilpotency_criterion(x).criterion

    def propose(self, rng: np.random.Generator, constraint: str) -> SemidirectElement:
        if constraint == "any" or rng.random() < 0.5:
            return self.uniform(rng)
        # zero tail with a nilpotent constant part c e
        shape, salg, p = self.shape, self.ambient.salg, self.p
        e = salg.labels.index("e")
        tensor = []
        for i in range(salg.dim):
            values = rng.integers(0, p, size=shape.dim)
            values[0] = int(rng.integers(0, p)) if i == e else 0
            tensor.append(DPElement.from_dense(shape, values))
        return SemidirectElement(self.ambient, tensor)


FAMILY_TYPES = {
    WittFamily.name: WittFamily,
    EnvelopeFamily.name: EnvelopeFamily,
    SemidirectFamily.name: SemidirectFamily,
}


@lru_cache(maxsize=None)
def build_algebra(family: str, p: int, M: int = 1, heights: Tuple[int, ...] = (1,)) -> AlgebraFamily:
    """Cached family handle; ``heights`` is n for witt and (n,) for zassenhaus-envelope."""
    try:
        family_type = FAMILY_TYPES[family]
    except KeyError:
        raise ValueError(f"Unknown family {family!r}; choose one of {', '.join(FAMILY_TYPES)}")
    handle = family_type(p, M, tuple(heights))
    logger.debug(f"Built {handle.label()} over F_{p}")
    return handle


def family_from_config(config) -> AlgebraFamily:
    algebra = config.algebra
    if algebra.family == "zassenhaus-envelope":
        heights = (algebra.n,)
    elif algebra.family == "witt":
        heights = algebra.heights
    else:
        heights = (1,)
    return build_algebra(algebra.family, config.field.p, config.field.M, tuple(heights))


def constraint_support(family: AlgebraFamily) -> List[str]:
    return list(family.constraints)

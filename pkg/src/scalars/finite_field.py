"""
Finite Fields
=============

``FieldSpec`` fixes F_{p^M} for a session: the prime, the extension degree and
a deterministic irreducible modulus. ``FieldElement`` is an immutable element
stored as its coefficient vector over F_p; the arithmetic itself is delegated
to ``galois``.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import galois

from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not galois.is_prime(p):
        logger.error(f"Rejected characteristic {p!r}")
        raise ValueError(f"p must be a prime >= 3, got {p!r}")
    return p


def smallest_irreducible(p: int, M: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible of degree M over F_p.

    Coefficients are returned low degree first with the leading 1 included;
    candidates are ordered by the tuple (c_0, ..., c_{M-1}).
    """
    if M == 1:
        return (0, 1)
    prime_field = galois.GF(p)
    for tail in itertools.product(range(p), repeat=M):
        coeffs = tail + (1,)
        if galois.Poly(list(reversed(coeffs)), field=prime_field).is_irreducible():
            return coeffs
    raise AssertionError(f"No irreducible polynomial of degree {M} over F_{p}")


@lru_cache(maxsize=None)
def _galois_field(p: int, M: int, irr: Tuple[int, ...]) -> type:
    if M == 1:
        return galois.GF(p)
    logger.debug(f"Building GF({p}^{M}) with modulus {irr}")
    modulus = galois.Poly(list(reversed(irr)), field=galois.GF(p))
    return galois.GF(p**M, irreducible_poly=modulus)


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^M} with its fixed modulus."""

    p: int
    M: int = 1
    irr: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        check_prime(self.p)
        if not isinstance(self.M, int) or self.M < 1:
            raise ValueError(f"Extension degree must be >= 1, got {self.M!r}")
        if self.irr is None:
            object.__setattr__(self, "irr", smallest_irreducible(self.p, self.M))
        else:
            irr = tuple(int(c) % self.p for c in self.irr)
            if len(irr) != self.M + 1 or irr[-1] != 1:
                raise ValueError(f"Modulus {self.irr} is not monic of degree {self.M}")
            object.__setattr__(self, "irr", irr)

    @property
    def q(self) -> int:
        return self.p**self.M

    @property
    def gf(self) -> type:
        """The ``galois`` field class of F_{p^M}."""
        return _galois_field(self.p, self.M, self.irr)

    @property
    def prime_field(self) -> type:
        return galois.GF(self.p)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (tuple, list)):
            return FieldElement(self, tuple(value))
        return FieldElement.from_int(self, int(value))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.M)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.M - 1))

    def serialize(self) -> str:
        return f"p={self.p};M={self.M};irr={','.join(str(c) for c in self.irr)}"

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        fields = dict(part.split("=", 1) for part in text.strip().split(";"))
        irr = tuple(int(c) for c in fields["irr"].split(",")) if "irr" in fields else None
        return cls(int(fields["p"]), int(fields.get("M", 1)), irr)


def ext_field_make(p: int, M: int = 1) -> FieldSpec:
    """F_{p^M} with the deterministic modulus."""
    spec = FieldSpec(p, M)
    logger.debug(f"Field spec {spec.serialize()}")
    return spec


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^M} as residues c_0..c_{M-1} of the polynomial basis."""

    spec: FieldSpec
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.M:
            raise ValueError(f"Expected {self.spec.M} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.spec.p for c in self.coeffs))

    @classmethod
    def from_int(cls, spec: FieldSpec, value: int) -> "FieldElement":
        """From the integer encoding sum c_i p^i (plain residues for M = 1)."""
        if spec.M == 1:
            return cls(spec, (value % spec.p,))
        if not 0 <= value < spec.q:
            raise ValueError(f"Integer encoding {value} outside [0, {spec.q})")
        digits = []
        for _ in range(spec.M):
            value, digit = divmod(value, spec.p)
            digits.append(digit)
        return cls(spec, tuple(digits))

    @classmethod
    def from_galois(cls, spec: FieldSpec, value) -> "FieldElement":
        return cls.from_int(spec, int(value))

    def to_int(self) -> int:
        return sum(c * self.spec.p**i for i, c in enumerate(self.coeffs))

    def to_galois(self):
        return self.spec.gf(self.to_int())

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("Field elements from different fields")
            return other
        return FieldElement.from_int(self.spec, int(other)) if self.spec.M == 1 else self.spec.one() * int(other)

    def _wrap(self, value) -> "FieldElement":
        return FieldElement.from_galois(self.spec, value)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.spec, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FieldElement(self.spec, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return FieldElement(self.spec, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        return self._wrap(self.to_galois() * other.to_galois())

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("Zero has no multiplicative inverse")
        return self._wrap(self.to_galois() ** -1)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._wrap(self.to_galois() ** exponent)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, spec: FieldSpec, text: str) -> "FieldElement":
        return cls(spec, tuple(int(c) for c in text.split(",")))

    def __repr__(self):
        if self.spec.M == 1:
            return f"F{self.spec.p}({self.coeffs[0]})"
        return f"F{self.spec.p}^{self.spec.M}({self.serialize()})"

"""
Reduction Chains
================

A chain is an ordered tuple of elementary moves. Applying it to an element
conjugates by each move in turn, so a chain [s_1, ..., s_k] acts as
s_k o ... o s_1. Moves and chains are immutable and serialize one move per
line:

    swap(i,j)
    scale(i,c)
    shift(i,<serialized polynomial>)
    admissible(a_1,...,a_{p^n-1})
    expad(<serialized element>)

Variable indices are 1-based, as in x_1, ..., x_m.
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Tuple

from src.automorphisms.admissible import AdmissibleAutomorphism, apply_admissible
from src.automorphisms.errors import InvalidAutomorphismError
from src.automorphisms.expad import exp_ad
from src.automorphisms.truncated import TruncatedAutomorphism, conjugate, substitution_images
from src.divided_power import AlgebraShape, DPElement, dp_embed
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

_MOVE_PATTERN = re.compile(r"\s*(\w+)\((.*)\)\s*", re.DOTALL)


class Move(ABC):
    """One elementary automorphism."""

    @abstractmethod
    def apply(self, x):
        """Image of x under this move."""

    @abstractmethod
    def serialize(self) -> str:
        ...


class SubstitutionMove(Move):
    """A move given by an automorphism of O(m;1)."""

    @abstractmethod
    def images(self, shape: AlgebraShape):
        ...

    def automorphism(self, shape: AlgebraShape) -> TruncatedAutomorphism:
        return _elementary_automorphism(self, shape)

    def apply(self, x):
        return conjugate(x, self.automorphism(x.shape))

    @abstractmethod
    def lift(self, shape: AlgebraShape, offset: int = 0) -> "SubstitutionMove":
        """The same move on a larger O(m;1), our variables sitting at positions offset+1, offset+2, ..."""

    def _check_index(self, i: int, shape: AlgebraShape):
        if not 1 <= i <= shape.m:
            raise InvalidAutomorphismError(f"Variable index {i} outside 1..{shape.m} for {self.serialize()}")


@lru_cache(maxsize=4096)
def _elementary_automorphism(move: SubstitutionMove, shape: AlgebraShape) -> TruncatedAutomorphism:
    return TruncatedAutomorphism(shape, move.images(shape))


@dataclass(frozen=True)
class Swap(SubstitutionMove):
    """x_i <-> x_j."""

    i: int
    j: int

    def images(self, shape: AlgebraShape):
        self._check_index(self.i, shape)
        self._check_index(self.j, shape)
        return substitution_images(
            shape,
            {self.i - 1: DPElement.variable(shape, self.j - 1), self.j - 1: DPElement.variable(shape, self.i - 1)},
        )

    def lift(self, shape: AlgebraShape, offset: int = 0) -> "Swap":
        return Swap(self.i + offset, self.j + offset)

    def serialize(self) -> str:
        return f"swap({self.i},{self.j})"


@dataclass(frozen=True)
class Scale(SubstitutionMove):
    """x_i -> c x_i."""

    i: int
    c: int

    def images(self, shape: AlgebraShape):
        self._check_index(self.i, shape)
        if self.c % shape.p == 0:
            raise InvalidAutomorphismError(f"Scaling x{self.i} by zero")
        return substitution_images(shape, {self.i - 1: DPElement.variable(shape, self.i - 1, self.c)})

    def lift(self, shape: AlgebraShape, offset: int = 0) -> "Scale":
        return Scale(self.i + offset, self.c)

    def serialize(self) -> str:
        return f"scale({self.i},{self.c})"


@dataclass(frozen=True)
class Shift(SubstitutionMove):
    """x_i -> x_i + g."""

    i: int
    g: DPElement

    def images(self, shape: AlgebraShape):
        self._check_index(self.i, shape)
        if self.g.shape != shape:
            raise InvalidAutomorphismError(f"Shift polynomial lives in {self.g.shape!r}, not {shape!r}")
        return substitution_images(shape, {self.i - 1: DPElement.variable(shape, self.i - 1) + self.g})

    def lift(self, shape: AlgebraShape, offset: int = 0) -> "Shift":
        if self.g.shape == shape and not offset:
            return self
        return Shift(self.i + offset, dp_embed(self.g, shape, offset))

    def serialize(self) -> str:
        return f"shift({self.i},{self.g.serialize()})"


@dataclass(frozen=True)
class AdmissibleMove(Move):
    """An admissible automorphism of O(1;n), acting on O(1;n) or on W(1;n)_p."""

    phi: AdmissibleAutomorphism

    def apply(self, x):
        return apply_admissible(x, self.phi)

    def serialize(self) -> str:
        return f"admissible({','.join(str(c) for c in self.phi.coeffs)})"


@dataclass(frozen=True, eq=False)
class ExpAdMove(Move):
    """exp(ad u) for an element u with nilpotent operator."""

    u: object

    def apply(self, x):
        return exp_ad(self.u)(x)

    def serialize(self) -> str:
        return f"expad({self.u.serialize()})"


@dataclass(frozen=True)
class Chain:
    """Ordered elementary moves, applied left to right."""

    moves: Tuple[Move, ...] = ()

    def __len__(self):
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __add__(self, other: "Chain") -> "Chain":
        return Chain(self.moves + other.moves)

    def then(self, *moves: Move) -> "Chain":
        return Chain(self.moves + tuple(moves))

    def is_identity(self) -> bool:
        return not self.moves

    def apply(self, x):
        for move in self.moves:
            x = move.apply(x)
        return x

    def automorphism(self, shape: AlgebraShape) -> TruncatedAutomorphism:
        """The composite s_k o ... o s_1 as one automorphism of O(m;1)."""
        total = TruncatedAutomorphism.identity(shape)
        for move in self.moves:
            if not isinstance(move, SubstitutionMove):
                raise TypeError(f"{move.serialize()} is not an automorphism of O(m;1)")
            total = move.automorphism(shape).compose(total)
        return total

    def lift(self, shape: AlgebraShape, offset: int = 0) -> "Chain":
        return Chain(tuple(move.lift(shape, offset) for move in self.moves))

    def serialize(self) -> str:
        return "\n".join(move.serialize() for move in self.moves)

    @classmethod
    def parse(cls, text: str, shape: Optional[AlgebraShape] = None,
              element_parser: Optional[Callable[[str], object]] = None) -> "Chain":
        """
        Read a serialized chain. ``shape`` is needed for ``admissible`` lines and
        ``element_parser`` for ``expad`` lines.
        """
        moves = []
        for line in text.splitlines():
            if not line.strip():
                continue
            match = _MOVE_PATTERN.fullmatch(line)
            if not match:
                raise ValueError(f"Malformed move {line!r}")
            kind, body = match.group(1), match.group(2)
            if kind == "swap":
                i, j = (int(v) for v in body.split(","))
                moves.append(Swap(i, j))
            elif kind == "scale":
                i, c = (int(v) for v in body.split(","))
                moves.append(Scale(i, c))
            elif kind == "shift":
                i, poly = body.split(",", 1)
                moves.append(Shift(int(i), DPElement.parse(poly, shape)))
            elif kind == "admissible":
                if shape is None:
                    raise ValueError("Parsing an admissible move needs the O(1;n) shape")
                coeffs = tuple(int(v) for v in body.split(","))
                moves.append(AdmissibleMove(AdmissibleAutomorphism(shape, coeffs)))
            elif kind == "expad":
                if element_parser is None:
                    raise ValueError("Parsing an expad move needs an element parser")
                moves.append(ExpAdMove(element_parser(body)))
            else:
                raise ValueError(f"Unknown move {kind!r}")
        logger.debug(f"Parsed chain of {len(moves)} moves")
        return cls(tuple(moves))

"""
Normal Forms in the Semidirect Product
======================================

An element D = sum_i b_i x f_i + z whose tail has the form
z = lambda d_0 + u (d_0 regular nilpotent on the first s variables, u in
I d_1 + ... + I d_m with coefficients of degree >= p, I = (x_{s+1}, ..., x_m))
is conjugated by exp(ad) moves to

    s_0' x x_1^{p-1} ... x_s^{p-1} + v' + z,    v' in S x I.

Monomials of the tensor part free of x_{s+1}, ..., x_m are cleared in DegLex
order: the least one x^(A) is hit by z(x^(A~)) for a single x^(A~), so one
exp(ad(s~ x x^(A~))) removes it without creating anything DegLex-smaller.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from src.automorphisms import Chain, ExpAdMove, ReductionError, exp_ad
from src.automorphisms.errors import PreconditionError
from src.cartan_algebras import DerivationElement, regular_nilpotent_derivation, witt_apply
from src.divided_power import AlgebraShape, DPElement, deglex_min, dp_embed, dp_filtration_degree, p_degree
from src.semidirect.algebra import SemidirectElement
from src.semidirect.salgebra import SVector
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class SemiReduceResult:
    """
    Chain of exp(ad) moves and the reduced form.

    ``s0`` is the S-vector multiplying the ordinary product
    x_1^{p-1} ... x_s^{p-1}; ``lam`` is the scalar in front of d_0.
    """

    chain: Chain
    form: SemidirectElement
    s: int
    lam: int
    s0: SVector


def standard_d0(shape: AlgebraShape, s: int) -> DerivationElement:
    """d_1 + x_1^{p-1} d_2 + ... + x_1^{p-1} ... x_{s-1}^{p-1} d_s inside W(m;1)."""
    if not 1 <= s <= shape.m:
        raise ValueError(f"Split {s} outside 1..{shape.m}")
    small = AlgebraShape.truncated(shape.field, s)
    coeffs = [dp_embed(f, shape) for f in regular_nilpotent_derivation(small).coeffs]
    return DerivationElement(shape, coeffs + [DPElement.zero(shape)] * (shape.m - s))


def top_prefix(shape: AlgebraShape, s: int) -> Tuple[int, ...]:
    """Exponent of x_1^(p-1) ... x_s^(p-1)."""
    p = shape.p
    return tuple(p - 1 if j < s else 0 for j in range(shape.m))


def in_ideal(f: DPElement, s: int) -> bool:
    """f in (x_{s+1}, ..., x_m)."""
    return all(any(a[s:]) for a in f.terms)


def is_ideal_derivation(u: DerivationElement, s: int) -> bool:
    """u in (I d_1 + ... + I d_m) with every coefficient of degree >= p."""
    p = u.shape.p
    return all(in_ideal(f, s) and (not f or dp_filtration_degree(f) >= p) for f in u.coeffs)


def dform_split(tail: DerivationElement, s: Optional[int] = None) -> Optional[Tuple[int, int]]:
    """
    (s, lambda) with tail - lambda d_0 an ideal derivation, or None.

    Without an explicit s the smallest consistent one is returned.
    """
    shape = tail.shape
    lam = tail.coeffs[0].constant_term
    if lam == 0:
        return None
    candidates = [s] if s is not None else range(1, shape.m + 1)
    for split in candidates:
        u = tail - standard_d0(shape, split).scale(lam)
        if is_ideal_derivation(u, split):
            return split, lam
    return None


def semi_exp_ad(u: SemidirectElement, target: SemidirectElement) -> SemidirectElement:
    """exp(ad u)(target); raises PreconditionError when the operator of u has nonzero p-th power."""
    return exp_ad(u)(target)


def _head_monomials(D: SemidirectElement, s: int):
    return [a for a in D.tensor_support() if not any(a[s:])]


def _preimage_exponent(a: Tuple[int, ...], s: int, p: int) -> Tuple[int, ...]:
    """A~ = (0, ..., 0, a_r + 1, a_{r+1}, ..., a_s, 0, ...) for the first r with a_r < p - 1."""
    r = next(j for j in range(s) if a[j] < p - 1)
    return (0,) * r + (a[r] + 1,) + tuple(a[r + 1:])


def semi_reduce(D: SemidirectElement, s: Optional[int] = None) -> SemiReduceResult:
    """Clear every tensor monomial free of x_{s+1}.. except the top one, in DegLex order."""
    ambient, shape = D.ambient, D.shape
    p, salg = shape.p, D.ambient.salg
    split = dform_split(D.tail, s)
    if split is None:
        logger.error(f"Tail is not of the form lambda d_0 + u: {D.tail!r}")
        raise PreconditionError("tail is not lambda d_0 + u", witness=D.tail)
    s, lam = split
    logger.debug(f"semi_reduce: split s = {s}, lambda = {lam}")
    top = top_prefix(shape, s)
    chain = Chain()
    current = D
    last_degree = -1
    for _ in range(p**s):
        pending = [a for a in _head_monomials(current, s) if a != top]
        target = deglex_min(pending, s, p)
        if target is None:
            break
        degree = p_degree(target, s, p)
        if degree <= last_degree:
            raise ReductionError(f"DegLex degree did not increase: {degree} after {last_degree}")
        last_degree = degree
        f = DPElement.monomial(shape, _preimage_exponent(target, s, p))
        image = witt_apply(current.tail, f)
        head = {a: c for a, c in image.terms.items() if not any(a[s:])}
        if set(head) != {target}:
            raise ReductionError(f"z({f!r}) does not hit x^{target} alone: {image!r}")
        kappa_inv = pow(head[target], -1, p)
        s_tilde = tuple(c * kappa_inv % p for c in current.s_part(target))
        move = ExpAdMove(SemidirectElement.pure(ambient, s_tilde, f))
        chain = chain.then(move)
        current = move.apply(current)
        if current.tail != D.tail:
            raise ReductionError("exp(ad) step changed the tail")
        if any(current.s_part(target)):
            raise ReductionError(f"Monomial x^{target} survived its clearing step")
        logger.debug(f"Cleared x^{target} with {salg.format(s_tilde)} ⊗ x^{_preimage_exponent(target, s, p)}")
    else:
        if any(a != top for a in _head_monomials(current, s)):
            raise ReductionError(f"Clearing did not terminate within {p**s} steps")

    if chain.apply(D) != current:
        raise ReductionError("Replaying the chain does not reproduce the reduced form")
    sign = (-1) ** s
    s0 = tuple(sign * c % p for c in current.s_part(top))
    logger.info(f"semi_reduce on {ambient.name}: s = {s}, {len(chain)} moves, s0' = {salg.format(s0)}")
    return SemiReduceResult(chain, current, s, lam, s0)

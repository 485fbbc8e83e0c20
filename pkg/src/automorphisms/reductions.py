"""
Normal Forms in W(m;1)
======================

Three constructive reductions, each returning the chain of elementary moves it
used so the claimed form can be replayed:

* ``demushkin_reduce``: any z outside W_(0) is conjugate to
  d_1 + x_1^{p-1} sum_i phi_i d_i with phi_i free of x_1.
* ``premet_regular_reduce``: a nilpotent y with y^{p^{n-1}} outside W_(0) is
  conjugate to the regular nilpotent derivation
  d_1 + x_1^{p-1} d_2 + ... + x_1^{p-1}...x_{n-1}^{p-1} d_n (n <= 3).
* ``dform_reduce``: a nilpotent z outside W_(0) is conjugate to d_0 + u with
  d_0 regular nilpotent on the first s variables and u in
  (I d_1 + ... + I d_m) intersected with W_(p-1), I = (x_{s+1}, ..., x_m).

Powers of x written here are ordinary powers; in the divided power basis
x^{p-1} = (p-1)! x^(p-1) = -x^(p-1).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.automorphisms.chain import Chain, Scale, Shift, Swap
from src.automorphisms.errors import PreconditionError, ReductionError
from src.cartan_algebras import (
    DerivationElement,
    derivation_filtration_degree,
    regular_nilpotent_derivation,
    witt_apply,
)
from src.divided_power import (
    AlgebraShape,
    DPElement,
    dp_embed,
    dp_filtration_degree,
    dp_mul,
    dp_restrict,
    monomials,
    ordinary_monomial,
)
from src.restricted import is_nilpotent, iterated_pth_power, pth_power
from src.utils.linalg import NotInSpanError, SpanDecomposer, as_ints
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

MAX_PREMET_RANK = 3


@dataclass(frozen=True)
class DemushkinResult:
    """Chain, normal form and the coefficients phi_i (elements of O(m;1) free of x_1)."""

    chain: Chain
    normal_form: DerivationElement
    phis: Tuple[DPElement, ...]


@dataclass(frozen=True)
class DFormResult:
    chain: Chain
    form: DerivationElement
    s: int
    d0: DerivationElement
    u: DerivationElement


def _outside_w0(z: DerivationElement) -> bool:
    return not z.is_zero() and derivation_filtration_degree(z) == -1


def _prefix_power(shape: AlgebraShape, count: int, offset: int = 0) -> DPElement:
    """x_{offset+1}^{p-1} ... x_{offset+count}^{p-1} in ordinary powers."""
    p = shape.p
    exps = tuple(p - 1 if offset <= j < offset + count else 0 for j in range(shape.m))
    return ordinary_monomial(shape, exps)


def _degree_part(f: DPElement, degree: int) -> Dict[Tuple[int, ...], int]:
    return {a: c for a, c in f.terms.items() if sum(a) == degree}


def _check_demushkin_form(z: DerivationElement) -> Optional[List[DPElement]]:
    """phi_1..phi_m when z = d_1 + x_1^{p-1} sum phi_i d_i, else None."""
    shape, p = z.shape, z.shape.p
    one = DPElement.one(shape)
    phis = []
    for i, f in enumerate(z.coeffs):
        rest = f - one if i == 0 else f
        # x_1^(p-1) psi = -x_1^{p-1} psi
        psi = {}
        for a, c in rest.terms.items():
            if a[0] != p - 1:
                return None
            psi[(0,) + a[1:]] = (-c) % p
        phis.append(DPElement(shape, psi))
    return phis


def _demushkin_normal_form(shape: AlgebraShape, phis: List[DPElement]) -> DerivationElement:
    lead = _prefix_power(shape, 1)
    coeffs = [dp_mul(lead, phi) for phi in phis]
    coeffs[0] = coeffs[0] + DPElement.one(shape)
    return DerivationElement(shape, coeffs)


def demushkin_power_check(normal_form: DerivationElement, phis: List[DPElement]) -> bool:
    """z^p == -(1 + x_1^{p-1} phi_1) sum_i phi_i d_i for z in Demushkin form."""
    shape = normal_form.shape
    unit = DPElement.one(shape) + dp_mul(_prefix_power(shape, 1), phis[0])
    expected = DerivationElement(shape, [dp_mul(unit, phi) for phi in phis]).scale(-1)
    return pth_power(normal_form) == expected


def demushkin_reduce(z: DerivationElement) -> DemushkinResult:
    """Conjugate z outside W(m;1)_(0) to d_1 + x_1^{p-1} sum phi_i d_i."""
    shape = z.shape
    if not shape.is_truncated():
        raise PreconditionError(f"Demushkin reduction works in W(m;1), got {shape!r}")
    if not _outside_w0(z):
        logger.error(f"Demushkin reduction needs z outside W_(0): {z!r}")
        raise PreconditionError("z lies in W_(0)", witness=z)
    p, m = shape.p, shape.m
    chain = Chain()
    current = z

    def step(move):
        nonlocal chain, current
        chain = chain.then(move)
        current = move.apply(current)
        logger.debug(f"Demushkin move {move.serialize()}")

    if current.coeffs[0].constant_term == 0:
        mu = next(i for i, f in enumerate(current.coeffs) if f.constant_term)
        step(Swap(1, mu + 1))
    lead = current.coeffs[0].constant_term
    if lead != 1:
        step(Scale(1, lead))
    for j in range(1, m):
        alpha = current.coeffs[j].constant_term
        if alpha:
            step(Shift(j + 1, DPElement.variable(shape, 0, alpha)))
    if current.coeffs[0].constant_term != 1 or any(f.constant_term for f in current.coeffs[1:]):
        raise ReductionError(f"Constant terms not normalized: {current!r}")

    for level in range(1, m * (p - 1) + 1):
        for i in range(m):
            part = _degree_part(current.coeffs[i], level)
            clear = {a: c for a, c in part.items() if a[0] < p - 1}
            if clear:
                lift = {(a[0] + 1,) + a[1:]: c for a, c in clear.items()}
                step(Shift(i + 1, DPElement(shape, lift)))
        for i, f in enumerate(current.coeffs):
            if any(a[0] < p - 1 for a in _degree_part(f, level)):
                raise ReductionError(f"Degree {level} part of coefficient {i + 1} not cleared")

    phis = _check_demushkin_form(current)
    if phis is None:
        raise ReductionError(f"Result is not in Demushkin form: {current!r}")
    normal = _demushkin_normal_form(shape, phis)
    if normal != current:
        raise ReductionError("Reconstructed normal form differs from the conjugated element")
    if not demushkin_power_check(normal, phis):
        logger.error("p-th power of the Demushkin form disagrees with its closed form")
        raise ReductionError("Demushkin p-power formula failed")
    logger.info(f"Demushkin reduction on {shape!r}: {len(chain)} moves")
    return DemushkinResult(chain, normal, tuple(phis))


def _premet_chain(y: DerivationElement) -> Chain:
    shape = y.shape
    n = shape.m
    target = regular_nilpotent_derivation(shape)
    if y == target:
        return Chain()
    if n == 1:
        result = demushkin_reduce(y)
        if result.normal_form != target:
            raise ReductionError(f"Nilpotent y in W(1;1) did not reduce to d_1: {result.normal_form!r}")
        return result.chain

    z = iterated_pth_power(y, n - 1)
    top = demushkin_reduce(z)
    if any(not phi.is_zero() for phi in top.phis):
        raise ReductionError("p^(n-1)-th power did not reduce to d_1")
    chain = top.chain.then(Swap(1, n))
    current = chain.apply(y)
    if any(f.involves(n - 1) for f in current.coeffs):
        raise ReductionError(f"Centralizer of d_{n} not free of x_{n}: {current!r}")

    small = AlgebraShape.truncated(shape.field, n - 1)
    head = DerivationElement(small, [dp_restrict(f, small) for f in current.coeffs[: n - 1]])
    sub = _premet_chain(head)
    lifted = sub.lift(shape)
    chain = chain + lifted
    current = lifted.apply(current)
    base = regular_nilpotent_derivation(small)
    for f, g in zip(current.coeffs[: n - 1], base.coeffs):
        if f != dp_embed(g, shape):
            raise ReductionError("Recursive step did not reach the smaller regular derivation")

    psi = dp_restrict(current.coeffs[n - 1], small)
    basis = [a for a in monomials(small) if any(a)]
    columns = [witt_apply(base, DPElement.monomial(small, a)).dense() for a in basis]
    columns.append(_prefix_power(small, n - 1).dense())
    gf = shape.field.prime_field
    try:
        coords = as_ints(SpanDecomposer(gf(np.vstack(columns) % shape.p)).coordinates(gf(psi.dense())))
    except NotInSpanError:
        raise ReductionError("Tail coefficient is not reachable by a shift of x_n")
    phi = DPElement(small, {a: int(c) for a, c in zip(basis, coords[:-1])})
    alpha = int(coords[-1])
    if alpha == 0:
        raise ReductionError("Top coefficient vanished; y is not regular")
    logger.debug(f"Premet step n={n}: shift by {phi!r}, scale {alpha}")
    if not phi.is_zero():
        chain = chain.then(Shift(n, dp_embed(phi, shape)))
    if alpha != 1:
        chain = chain.then(Scale(n, alpha))
    return chain


def premet_regular_reduce(y: DerivationElement) -> Tuple[Chain, DerivationElement]:
    """Chain conjugating a regular nilpotent y in W(n;1), n <= 3, to the standard one."""
    shape = y.shape
    if not shape.is_truncated():
        raise PreconditionError(f"Regular reduction works in W(n;1), got {shape!r}")
    n = shape.m
    if n > MAX_PREMET_RANK:
        raise PreconditionError(f"Regular reduction is capped at n = {MAX_PREMET_RANK}, got n = {n}")
    if not is_nilpotent(y):
        raise PreconditionError("y is not nilpotent", witness=y)
    witness = iterated_pth_power(y, n - 1)
    if not _outside_w0(witness):
        logger.info("Input is singular: its p^(n-1)-th power lies in W_(0)")
        raise PreconditionError("singular: y^[p]^(n-1) lies in W_(0)", witness=witness)
    chain = _premet_chain(y)
    target = regular_nilpotent_derivation(shape)
    if chain.apply(y) != target:
        raise ReductionError("Chain does not conjugate y to the regular nilpotent derivation")
    logger.info(f"Regular reduction on {shape!r}: {len(chain)} moves")
    return chain, target


def _divide_prefix(f: DPElement, k: int) -> Optional[DPElement]:
    """f / (x_1^{p-1} ... x_k^{p-1}) when divisible, else None."""
    p = f.shape.p
    sign = (-1) ** k
    terms = {}
    for a, c in f.terms.items():
        if any(a[j] != p - 1 for j in range(k)):
            return None
        terms[(0,) * k + a[k:]] = c * sign
    return DPElement(f.shape, terms)


def _in_ideal(f: DPElement, s: int) -> bool:
    """f in the ideal generated by x_{s+1}, ..., x_m."""
    return all(any(a[s:]) for a in f.terms)


def dform_reduce(z: DerivationElement) -> DFormResult:
    """Conjugate a nilpotent z outside W(m;1)_(0) to d_0 + u."""
    shape = z.shape
    if not shape.is_truncated():
        raise PreconditionError(f"dform reduction works in W(m;1), got {shape!r}")
    if not _outside_w0(z):
        raise PreconditionError("z lies in W_(0)", witness=z)
    if not is_nilpotent(z):
        raise PreconditionError("z is not nilpotent", witness=z)
    m = shape.m
    chain = Chain()
    current = z
    s = 0
    while s < m:
        window = AlgebraShape.truncated(shape.field, m - s)
        tail = []
        for f in current.coeffs[s:]:
            quotient = _divide_prefix(f, s)
            if quotient is None:
                raise ReductionError(f"Coefficients beyond position {s} lost the common prefix")
            tail.append(dp_restrict(quotient, window, s))
        tail_derivation = DerivationElement(window, tail)
        if s and not _outside_w0(tail_derivation):
            break
        step = demushkin_reduce(tail_derivation).chain.lift(shape, s)
        chain = chain + step
        current = step.apply(current)
        s += 1
        logger.debug(f"dform stage {s}: {len(step)} moves")

    small = AlgebraShape.truncated(shape.field, s)
    head_coeffs = []
    for f in current.coeffs[:s]:
        head_coeffs.append(DPElement(small, {a[:s]: c for a, c in f.terms.items() if not any(a[s:])}))
    head = DerivationElement(small, head_coeffs)
    if s > MAX_PREMET_RANK and head != regular_nilpotent_derivation(small):
        raise PreconditionError(f"Quotient derivation needs a regular reduction with s = {s} > {MAX_PREMET_RANK}")
    regular_chain, _ = premet_regular_reduce(head) if head != regular_nilpotent_derivation(small) else (Chain(), None)
    lifted = regular_chain.lift(shape)
    chain = chain + lifted
    current = lifted.apply(current)

    d0 = DerivationElement(shape, [dp_embed(f, shape) for f in regular_nilpotent_derivation(small).coeffs]
                           + [DPElement.zero(shape)] * (m - s))
    u = current - d0
    p = shape.p
    for f in u.coeffs:
        if not _in_ideal(f, s):
            raise ReductionError("u has a coefficient outside the ideal (x_{s+1}, ..., x_m)")
        if f and dp_filtration_degree(f) < p:
            raise ReductionError("u is not in W_(p-1)")
    logger.info(f"dform reduction on {shape!r}: s = {s}, {len(chain)} moves")
    return DFormResult(chain, current, s, d0, u)


def stabilizer_spot_check(shape: AlgebraShape, rng: np.random.Generator, trials: int = 10) -> Dict[str, int]:
    """Random nontrivial elementary moves must all move the regular nilpotent derivation."""
    target = regular_nilpotent_derivation(shape)
    p, m = shape.p, shape.m
    quadratic = [a for a in monomials(shape) if sum(a) >= 2]
    moved = 0
    for _ in range(trials):
        kind = rng.integers(0, 3 if m > 1 else 2)
        if kind == 0:
            move = Scale(int(rng.integers(1, m + 1)), int(rng.integers(2, p)))
        elif kind == 1:
            terms = {}
            while not terms:
                for a in quadratic:
                    if rng.random() < 0.2:
                        terms[a] = int(rng.integers(1, p))
            move = Shift(int(rng.integers(1, m + 1)), DPElement(shape, terms))
        else:
            i, j = rng.choice(np.arange(1, m + 1), size=2, replace=False)
            move = Swap(int(i), int(j))
        if move.apply(target) != target:
            moved += 1
        else:
            logger.error(f"{move.serialize()} fixes the regular nilpotent derivation")
    return {"trials": trials, "moved": moved}

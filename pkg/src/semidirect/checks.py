"""
Structural checks for the semidirect products and the W(m;1) forms behind them.
"""

from typing import Dict, List, Optional

import numpy as np

from src.automorphisms import exp_ad
from src.cartan_algebras import DerivationElement, derivation_filtration_degree, witt_apply, witt_bracket
from src.divided_power import AlgebraShape, DPElement, dp_mul, dp_power, monomials
from src.restricted import is_nilpotent, iterated_pth_power, pth_power
from src.scalars import FieldSpec
from src.semidirect.algebra import SemidirectElement, SemidirectProduct
from src.semidirect.reduce import in_ideal, standard_d0, top_prefix
from src.semidirect.salgebra import SAlgebra
from src.utils.linalg import rank
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def random_ideal_derivation(shape: AlgebraShape, s: int, rng: np.random.Generator, density: float = 0.3,
                            min_degree: Optional[int] = None) -> DerivationElement:
    """Random u in I d_1 + ... + I d_m, I = (x_{s+1}, ..., x_m); coefficients of degree >= min_degree (default p)."""
    p = shape.p
    min_degree = p if min_degree is None else min_degree
    allowed = [a for a in monomials(shape) if any(a[s:]) and sum(a) >= min_degree]
    coeffs = []
    for _ in range(shape.m):
        terms = {a: int(rng.integers(1, p)) for a in allowed if rng.random() < density}
        coeffs.append(DPElement(shape, terms))
    return DerivationElement(shape, coeffs)


def in_ideal_derivations(u: DerivationElement, s: int) -> bool:
    return all(in_ideal(f, s) for f in u.coeffs)


def d0_image_check(shape: AlgebraShape, s: int, u: Optional[DerivationElement] = None) -> Dict[str, object]:
    """
    M = I + z(m) for z = d_0 + u has dimension p^m - 1 and is complemented by
    x_1^(p-1) ... x_s^(p-1).
    """
    z = standard_d0(shape, s) if u is None else standard_d0(shape, s) + u
    gf = shape.field.prime_field
    rows = [DPElement.monomial(shape, a).dense() for a in monomials(shape) if any(a[s:])]
    rows += [witt_apply(z, DPElement.monomial(shape, a)).dense() for a in monomials(shape) if any(a)]
    dim_m = rank(gf(np.vstack(rows) % shape.p))
    rows.append(DPElement.monomial(shape, top_prefix(shape, s)).dense())
    dim_total = rank(gf(np.vstack(rows) % shape.p))
    passed = dim_m == shape.dim - 1 and dim_total == shape.dim
    if not passed:
        logger.error(f"Image check failed on {shape!r}, s = {s}: dim M = {dim_m}, with top = {dim_total}")
    return {"dim_M": dim_m, "dim_with_top": dim_total, "expected": shape.dim - 1, "passed": passed}


def ideal_derivations_check(shape: AlgebraShape, s: int, rng: np.random.Generator, samples: int = 5) -> Dict[str, object]:
    """I d_1 + ... + I d_m is ad d_0-invariant, closed under brackets and p-th powers, and inside W_(0)."""
    d0 = standard_d0(shape, s)
    members = [random_ideal_derivation(shape, s, rng, min_degree=1) for _ in range(samples)]
    failures: List[str] = []
    for index, w in enumerate(members):
        if not in_ideal_derivations(witt_bracket(d0, w), s):
            failures.append(f"[d0, w{index}]")
        power = pth_power(w)
        if not in_ideal_derivations(power, s):
            failures.append(f"w{index}^[p]")
        if w and derivation_filtration_degree(w) < 0:
            failures.append(f"w{index} outside W_(0)")
        for other_index, other in enumerate(members[:index]):
            if not in_ideal_derivations(witt_bracket(w, other), s):
                failures.append(f"[w{index}, w{other_index}]")
    for label in failures:
        logger.error(f"Ideal derivation closure failed at {label}")
    return {"samples": samples, "failures": failures, "passed": not failures}


def z_power_check(z: DerivationElement, s: int) -> bool:
    """z^[p]^s lies in W_(0) for z = d_0 + u."""
    power = iterated_pth_power(z, s)
    return power.is_zero() or derivation_filtration_degree(power) >= 0


def pure_pth_check(ambient: SemidirectProduct, y, g: DPElement) -> bool:
    """(y x g)^[p] == y^[p] x g^p."""
    lhs = pth_power(SemidirectElement.pure(ambient, y, g))
    rhs = SemidirectElement.pure(ambient, ambient.salg.pth(y), dp_power(g, ambient.shape.p))
    return lhs == rhs


def expad_formula_check(ambient: SemidirectProduct, s_tilde, f: DPElement, d: DerivationElement) -> bool:
    """exp(ad(s~ x f))(d) == d - s~ x d(f) - s~^[p] x f^{p-1} d(f) for f in the maximal ideal."""
    salg, p = ambient.salg, ambient.shape.p
    u = SemidirectElement.pure(ambient, s_tilde, f)
    lhs = exp_ad(u)(SemidirectElement.derivation(ambient, d))
    df = witt_apply(d, f)
    rhs = (
        SemidirectElement.derivation(ambient, d)
        - SemidirectElement.pure(ambient, s_tilde, df)
        - SemidirectElement.pure(ambient, salg.pth(s_tilde), dp_mul(dp_power(f, p - 1), df))
    )
    return lhs == rhs


def sl2_line(field: FieldSpec) -> SemidirectProduct:
    """sl_2 x O(1;1) x| k d: the (3p+1)-dimensional algebra."""
    return SemidirectProduct.with_partials(SAlgebra.sl2(field), AlgebraShape.truncated(field, 1))


def g_dimension_check(field: FieldSpec) -> bool:
    g = sl2_line(field)
    return g.dimension() == 3 * field.p + 1 and len(g.realization.basis()) == 3 * field.p + 1


def torus_power_check(g: SemidirectProduct, coeffs: List[int], lam: int) -> bool:
    """
    (h x g + lambda d)^[p] == h x (a_0^p - lambda^{p-1} a_{p-1}) where
    g = sum a_i x^i in ordinary powers.
    """
    shape, p = g.shape, g.shape.p
    h = g.salg.labels.index("h")
    poly = DPElement.zero(shape)
    for i, a in enumerate(coeffs):
        poly = poly + dp_power(DPElement.variable(shape, 0), i).scale(a)
    element = SemidirectElement.pure(g, g.salg.basis_vector(h), poly) + SemidirectElement.derivation(
        g, DerivationElement.partial(shape, 0).scale(lam))
    a0 = coeffs[0] if coeffs else 0
    top = coeffs[p - 1] if len(coeffs) >= p else 0
    value = (pow(a0, p, p) - pow(lam, p - 1, p) * top) % p
    expected = SemidirectElement.pure(g, g.salg.basis_vector(h), DPElement.constant(shape, value))
    return pth_power(element) == expected


def autg1_element(g: SemidirectProduct, lam: int, b) -> SemidirectElement:
    """lambda d + b x x^{p-1} (ordinary power)."""
    shape, p = g.shape, g.shape.p
    top = dp_power(DPElement.variable(shape, 0), p - 1)
    return SemidirectElement.pure(g, b, top) + SemidirectElement.derivation(
        g, DerivationElement.partial(shape, 0).scale(lam))


def autg1_power_check(g: SemidirectProduct, lam: int, b) -> Dict[str, object]:
    """a = lambda d + b x x^{p-1} has a^[p] = (p-1)! lambda^{p-1} b x 1, and is nilpotent iff b is."""
    shape, p = g.shape, g.shape.p
    a = autg1_element(g, lam, b)
    factor = -pow(lam, p - 1, p) % p
    expected = SemidirectElement.pure(g, tuple(c * factor % p for c in g.salg.vector(b)), DPElement.one(shape))
    power_ok = pth_power(a) == expected
    nilpotent_ok = is_nilpotent(a) == g.salg.is_nilpotent(b)
    return {"power": power_ok, "nilpotency": nilpotent_ok, "passed": power_ok and nilpotent_ok}


def nilpotency_bound_check(elements: List[SemidirectElement], exponent: int = 2) -> Dict[str, int]:
    """Every nilpotent element has a^[p]^exponent == 0."""
    nilpotent = violations = 0
    for a in elements:
        if is_nilpotent(a):
            nilpotent += 1
            if not iterated_pth_power(a, exponent).is_zero():
                violations += 1
                logger.error(f"Nilpotent element with a^[p^{exponent}] != 0: {a!r}")
    return {"checked": len(elements), "nilpotent": nilpotent, "violations": violations}

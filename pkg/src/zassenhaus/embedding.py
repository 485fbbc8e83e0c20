"""
Embedding into W(n;1)
=====================

O(1;n) and O(n;1) are isomorphic through x^(r) -> x_1^(r_0)...x_n^(r_{n-1}),
r = sum r_k p^k. Both monomial bases are ranked by the same p-adic number, so
an element of W(1;n)_p and its image in W(n;1) have the same operator matrix.
"""

from typing import Dict, Sequence

import numpy as np

from src.cartan_algebras import DerivationElement, derivation_from_operator, regular_nilpotent_derivation, witt_bracket
from src.divided_power import AlgebraShape, DPElement, ordinary_monomial
from src.restricted import is_nilpotent, pth_power
from src.utils.logging_config import get_logger
from src.zassenhaus.envelope import as_envelope_element, lp_bracket, lp_pth, lp_realization, random_envelope_element
from src.zassenhaus.reductions import conjugate_of_partial, yao_shu_form

logger = get_logger(__name__)


def iota_shape(shape: AlgebraShape) -> AlgebraShape:
    """O(n;1) for O(1;n)."""
    return AlgebraShape.truncated(shape.field, shape.n[0])


def iota_poly(f: DPElement) -> DPElement:
    target = iota_shape(f.shape)
    return DPElement(target, {target.unrank(r): c for (r,), c in f.items()}, check=False)


def iota_embedding(D) -> DerivationElement:
    """Image of D in W(n;1)."""
    D = as_envelope_element(D)
    operator = lp_realization(D.shape).operator(D)
    return derivation_from_operator(iota_shape(D.shape), operator)


def iota_yao_shu_image(shape: AlgebraShape, ls: Sequence[int]) -> DerivationElement:
    """D_1 + sum_i (-1)^i l_i x_1^{p-1}...x_i^{p-1} d_1 with ordinary powers."""
    target = iota_shape(shape)
    p = target.p
    image = regular_nilpotent_derivation(target, divided=True)
    first = DPElement.zero(target)
    for i, l in enumerate(ls, start=1):
        exps = tuple(p - 1 if j < i else 0 for j in range(target.m))
        first = first + ordinary_monomial(target, exps).scale((-1) ** i * l)
    coeffs = list(image.coeffs)
    coeffs[0] = coeffs[0] + first
    return DerivationElement(target, coeffs)


def iota_check(shape: AlgebraShape, rng: np.random.Generator, samples: int = 10) -> Dict[str, bool]:
    """Bracket and p-map transfer on random pairs, iota(d) = D_1, the Yao-Shu image and nilpotency transfer."""
    shape = shape.with_split(None)
    p, n = shape.p, shape.n[0]
    target = iota_shape(shape)
    homomorphism, restricted = True, True
    for _ in range(samples):
        A, B = random_envelope_element(shape, rng), random_envelope_element(shape, rng)
        if iota_embedding(lp_bracket(A, B)) != witt_bracket(iota_embedding(A), iota_embedding(B)):
            logger.error(f"iota does not preserve [{A!r}, {B!r}]")
            homomorphism = False
        if iota_embedding(lp_pth(A)) != pth_power(iota_embedding(A)):
            logger.error(f"iota does not preserve the p-th power of {A!r}")
            restricted = False

    partial = iota_embedding(DerivationElement.partial(shape, 0, DPElement.one(shape)))
    partial_ok = partial == regular_nilpotent_derivation(target, divided=True)
    divided_ordinary = regular_nilpotent_derivation(target, divided=True) == _signed_regular(target)

    ls = [int(c) for c in rng.integers(0, p, size=n)]
    form_ok = iota_embedding(yao_shu_form(shape, ls)) == iota_yao_shu_image(shape, ls)

    nilpotency_ok = True
    for _ in range(samples):
        A = random_envelope_element(shape, rng)
        if is_nilpotent(A) != is_nilpotent(iota_embedding(A)):
            nilpotency_ok = False
    regular = conjugate_of_partial(shape, rng)
    nilpotency_ok = nilpotency_ok and is_nilpotent(iota_embedding(regular))

    report = {
        "homomorphism": homomorphism,
        "restricted": restricted,
        "partial_image": partial_ok and divided_ordinary,
        "yao_shu_image": form_ok,
        "nilpotency_transfer": nilpotency_ok,
    }
    report["passed"] = all(report.values())
    logger.info(f"iota check on {shape!r}: {report}")
    return report


def _signed_regular(target: AlgebraShape) -> DerivationElement:
    """d_1 + sum_l (-1)^l x_1^{p-1}...x_l^{p-1} d_{l+1}, ordinary powers."""
    p = target.p
    coeffs = []
    for k in range(target.m):
        exps = tuple(p - 1 if j < k else 0 for j in range(target.m))
        coeffs.append(ordinary_monomial(target, exps).scale((-1) ** k))
    return DerivationElement(target, coeffs)

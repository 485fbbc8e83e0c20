"""
Normal Forms and Nilpotent Classes in W(1;n)_p
==============================================

* ``yao_shu_reduce``: alpha_0 d + f d with alpha_0 != 0 is conjugate under
  admissible automorphisms to d + sum_{i=1}^n l_i x^(p^i - 1) d.
* ``tyurin_reduce``: d^{p^t} + sum_{i<t} beta_i d^{p^i} + g d is conjugate,
  with identical linear part, to the same head plus x^(p^n - p^t) h(x) d with
  deg h < p^t.
* ``classify_nilpotent``: a nilpotent D is Regular when D^{p^{n-1}} lies
  outside L_(0) and Singular otherwise.

Every reduction replays its chain on the input before returning.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.automorphisms import (
    AdmissibleAutomorphism,
    AdmissibleMove,
    Chain,
    PreconditionError,
    ReductionError,
    is_restricted_exponent,
)
from src.divided_power import AlgebraShape, DPElement, dp_mul
from src.restricted import NotNilpotentError, centralizer_dimension, iterated_pth_power, pth_power
from src.utils.logging_config import get_logger
from src.zassenhaus.envelope import (
    PEnvelopeElement,
    as_envelope_element,
    in_l0,
    lp_in_filtration,
    lp_realization,
)

logger = get_logger(__name__)

REGULAR = "Regular"
SINGULAR = "Singular"


@dataclass(frozen=True)
class YaoShuResult:
    chain: Chain
    form: PEnvelopeElement
    ls: Tuple[int, ...]

    @property
    def reaches_partial(self) -> bool:
        """All l_i vanish, so the chain conjugates the input to d."""
        return not any(self.ls)


@dataclass(frozen=True)
class TyurinResult:
    chain: Chain
    form: PEnvelopeElement
    t: int
    betas: Tuple[int, ...]
    mus: Tuple[int, ...]

    @property
    def h(self) -> DPElement:
        shape = self.form.shape
        return DPElement(shape, {(eta,): mu for eta, mu in enumerate(self.mus) if mu})


@dataclass(frozen=True)
class NilpotentClass:
    tag: str
    witness: PEnvelopeElement
    in_l0: bool
    chain: Optional[Chain] = None
    form: Optional[PEnvelopeElement] = None

    @property
    def regular(self) -> bool:
        return self.tag == REGULAR


def _admissible_step(shape: AlgebraShape, k: int, c: int, linear: int = 1) -> AdmissibleMove:
    """x -> linear x + c x^(k)."""
    coeffs = [0] * max(k, 1)
    coeffs[0] = linear
    if k > 1:
        coeffs[k - 1] = c
    return AdmissibleMove(AdmissibleAutomorphism(shape, tuple(coeffs)))


def random_admissible(shape: AlgebraShape, rng: np.random.Generator, identical_linear: bool = False,
                      density: float = 0.3) -> AdmissibleAutomorphism:
    """Random admissible automorphism with sparse higher coefficients."""
    p, n = shape.p, shape.n[0]
    coeffs = np.where(rng.random(shape.dim - 1) < density, rng.integers(0, p, size=shape.dim - 1), 0)
    coeffs[0] = 1 if identical_linear else rng.integers(1, p)
    for j in range(1, n):
        coeffs[p**j - 1] = 0
    return AdmissibleAutomorphism(shape.with_split(None), tuple(int(c) for c in coeffs))


def yao_shu_reduce(D) -> YaoShuResult:
    """Chain taking alpha_0 d + f d (alpha_0 != 0, f in m) to d + sum l_i x^(p^i - 1) d."""
    D = as_envelope_element(D)
    if not D.in_witt():
        raise PreconditionError("Yao-Shu reduction needs an element of W(1;n)", witness=D)
    shape, p, n = D.shape, D.shape.p, D.n
    alpha0 = D.poly.constant_term
    if alpha0 == 0:
        logger.error(f"Yao-Shu reduction needs alpha_0 != 0: {D!r}")
        raise PreconditionError("alpha_0 = 0", witness=D)
    chain = Chain()
    current = D

    def step(move: AdmissibleMove):
        nonlocal chain, current
        chain = chain.then(move)
        current = move.apply(current)
        logger.debug(f"Yao-Shu move {move.serialize()}")

    if alpha0 != 1:
        step(_admissible_step(shape, 1, 0, linear=alpha0))
    if current.poly.constant_term != 1:
        raise ReductionError(f"Scaling left constant term {current.poly.constant_term}")
    for i in range(1, shape.dim - 1):
        if is_restricted_exponent(i, p, n):
            continue
        beta = current.poly.coefficient((i,))
        if beta:
            step(_admissible_step(shape, i + 1, beta))
            if current.poly.coefficient((i,)) or any(current.poly.coefficient((j,)) for j in range(1, i)
                                                      if not is_restricted_exponent(j, p, n)):
                raise ReductionError(f"Coefficient of x^({i}) d was not cleared")

    kept = {p**i - 1 for i in range(1, n + 1)}
    stray = [a for (a,), _ in current.poly.items() if a and a not in kept]
    if stray or current.poly.constant_term != 1:
        raise ReductionError(f"Result is not in Yao-Shu form, stray degrees {stray}")
    if chain.apply(D) != current:
        raise ReductionError("Chain does not replay to the Yao-Shu form")
    ls = tuple(current.poly.coefficient((p**i - 1,)) for i in range(1, n + 1))
    logger.info(f"Yao-Shu reduction on {shape!r}: {len(chain)} moves, l = {ls}")
    return YaoShuResult(chain, current, ls)


def yao_shu_form(shape: AlgebraShape, ls: Sequence[int]) -> PEnvelopeElement:
    """d + sum_i ls[i-1] x^(p^i - 1) d."""
    shape = shape.with_split(None)
    p = shape.p
    terms = {(0,): 1}
    for i, l in enumerate(ls, start=1):
        if l % p:
            terms[(p**i - 1,)] = l
    return PEnvelopeElement(shape, DPElement(shape, terms))


def _top_tail(D: PEnvelopeElement) -> int:
    return max((i for i, c in enumerate(D.tails, start=1) if c), default=0)


def tyurin_reduce(D, t: Optional[int] = None) -> TyurinResult:
    """Chain with identical linear part clearing x^(j) d for 1 <= j < p^n - p^t."""
    D = as_envelope_element(D)
    shape, p, n = D.shape, D.shape.p, D.n
    if p <= 3:
        raise PreconditionError(f"Tyurin reduction needs p > 3, got p = {p}")
    t = _top_tail(D) if t is None else t
    if not 1 <= t <= n - 1:
        raise PreconditionError(f"t = {t} outside 1..{n - 1}", witness=D)
    if D.tail_coefficient(t) != 1 or any(D.tail_coefficient(i) for i in range(t + 1, n)):
        raise PreconditionError(f"D is not of the form d^(p^{t}) + lower terms", witness=D)
    betas = tuple(D.tail_coefficient(i) for i in range(t))
    chain = Chain()
    current = D
    for j in range(1, p**n - p**t):
        gamma = current.poly.coefficient((j,))
        if not gamma:
            continue
        k = p**t + j
        if is_restricted_exponent(k - 1, p, n):
            logger.error(f"Clearing x^({j}) d needs x -> x + c x^({k}), which is not admissible")
            raise ReductionError(f"No admissible step clears x^({j}) d")
        move = _admissible_step(shape, k, gamma)
        chain = chain.then(move)
        current = move.apply(current)
        logger.debug(f"Tyurin move {move.serialize()}")
        if any(current.poly.coefficient((i,)) for i in range(1, j + 1)):
            raise ReductionError(f"Coefficients up to x^({j}) d were not cleared")
        if current.tails != D.tails or current.poly.constant_term != betas[0]:
            raise ReductionError("Identical-linear-part step changed the d^(p^i) head")

    offset = p**n - p**t
    mus = tuple(current.poly.coefficient((offset + eta,)) for eta in range(p**t))
    h = DPElement(shape, {(eta,): mu for eta, mu in enumerate(mus) if mu})
    # x^(p^n - p^t) x^(eta) = x^(p^n - p^t + eta) for eta < p^t
    rebuilt = DPElement.constant(shape, betas[0]) + dp_mul(DPElement.monomial(shape, (offset,)), h)
    if PEnvelopeElement(shape, rebuilt, current.tails) != current:
        raise ReductionError("Result does not factor as x^(p^n - p^t) h(x) d")
    if chain.apply(D) != current:
        raise ReductionError("Chain does not replay to the Tyurin form")
    logger.info(f"Tyurin reduction on {shape!r}: t = {t}, {len(chain)} moves, h = {h!r}")
    return TyurinResult(chain, current, t, betas, mus)


def classify_nilpotent(D) -> NilpotentClass:
    """
    Regular iff D^{p^{n-1}} lies outside L_(0).

    Raises NotNilpotentError when D^{p^n} != 0. Regular elements of W(1;n)
    get their Yao-Shu form attached when the reduction goes through.
    """
    D = as_envelope_element(D)
    n = D.n
    witness = iterated_pth_power(D, n - 1)
    if not pth_power(witness).is_zero():
        logger.error(f"D^(p^{n}) != 0 for {D!r}")
        raise NotNilpotentError("D is not nilpotent")
    singular = in_l0(witness)
    chain, form = None, None
    if not singular and D.in_witt() and D.poly.constant_term:
        try:
            result = yao_shu_reduce(D)
            chain, form = result.chain, result.form
        except ReductionError as exc:
            logger.warning(f"Yao-Shu reduction failed on a regular element: {exc}")
    tag = SINGULAR if singular else REGULAR
    logger.debug(f"Classified {D!r} as {tag}")
    return NilpotentClass(tag, witness, singular, chain, form)


def singular_branch(D) -> Dict[str, object]:
    """
    Branch data for a nilpotent D with a d^{p^i} tail, i >= 1.

    D is rescaled so its top tail coefficient is 1 and brought to the Tyurin
    form; j is the smallest index with beta_j != 0. The predicted outcome is
    D^{p^{n-1}} in L_(1) unless beta_0 != 0, in which case D^{p^{n-1}} is a
    nonzero element outside L_(0) with vanishing p-th power. For t = n-1 the
    Tyurin scalars satisfy mu_0 = 0, and also mu_1 = 0 when every beta_i vanishes.
    """
    D = as_envelope_element(D)
    p, n = D.shape.p, D.n
    t = _top_tail(D)
    if t == 0:
        raise PreconditionError("D has no d^(p^i) tail with i >= 1", witness=D)
    normalized = D.scale(pow(D.tail_coefficient(t), -1, p))
    result = tyurin_reduce(normalized, t)
    j = next((i for i, b in enumerate(result.betas) if b), None)
    witness = iterated_pth_power(result.form, n - 1)
    in_l1 = lp_in_filtration(witness, 1)
    outside_l0 = not in_l0(witness)
    if j == 0:
        prediction = outside_l0 and not witness.is_zero() and pth_power(witness).is_zero()
    else:
        prediction = in_l1
    mu_prediction = True
    if t == n - 1:
        mu_prediction = result.mus[0] == 0 and (j is not None or result.mus[1] == 0)
    logger.debug(f"Singular branch t = {t}, j = {j}, betas = {result.betas}, mus = {result.mus}")
    return {
        "t": t,
        "j": j,
        "betas": result.betas,
        "mus": result.mus,
        "witness_in_l1": in_l1,
        "witness_outside_l0": outside_l0,
        "prediction_holds": prediction,
        "mu_prediction_holds": mu_prediction,
        "passed": prediction and mu_prediction,
    }


def _nilpotent(D: PEnvelopeElement) -> bool:
    return iterated_pth_power(D, D.n).is_zero()


def singular_branch_check(shape: AlgebraShape, rng: np.random.Generator, samples: int = 20) -> Dict[str, object]:
    """
    singular_branch on nilpotent elements with tails: the plain heads d^{p^t},
    then random heads with random Tyurin tails, kept when nilpotent and moved
    by a random admissible automorphism.
    """
    shape = shape.with_split(None)
    p, n = shape.p, shape.n[0]
    if n < 2:
        raise PreconditionError(f"W(1;{n})_p has no d^(p^i) tails")
    candidates: List[PEnvelopeElement] = [PEnvelopeElement.partial_power(shape, t) for t in range(1, n)]
    for _ in range(samples):
        t = int(rng.integers(1, n))
        tails = [int(rng.integers(0, p)) if i < t else 0 for i in range(1, n)]
        tails[t - 1] = 1
        offset = p**n - p**t
        terms = {(0,): int(rng.integers(0, p))}
        for eta in range(2, p**t):
            if rng.random() < 0.3:
                terms[(offset + eta,)] = int(rng.integers(1, p))
        candidates.append(PEnvelopeElement(shape, DPElement(shape, terms), tails))
    tested, failures = 0, []
    for D in candidates:
        if not _nilpotent(D):
            continue
        moved = AdmissibleMove(random_admissible(shape, rng, identical_linear=True)).apply(D)
        report = singular_branch(moved)
        tested += 1
        if not report["passed"]:
            logger.error(f"Singular branch prediction failed for {moved!r}: {report}")
            failures.append(moved.serialize())
    logger.info(f"Singular branch check: {tested} nilpotent elements, {len(failures)} failures")
    return {"tested": tested, "failures": failures, "passed": tested > 0 and not failures}


def regular_witness_check(shape: AlgebraShape, rng: np.random.Generator, samples: int = 5) -> bool:
    """(d + sum alpha_i d^{p^i})^{p^{n-1}} = d^{p^{n-1}}."""
    shape = shape.with_split(None)
    p, n = shape.p, shape.n[0]
    target = PEnvelopeElement.partial_power(shape, n - 1)
    for _ in range(samples):
        alphas = [int(c) for c in rng.integers(0, p, size=n - 1)]
        D = PEnvelopeElement(shape, DPElement.one(shape), alphas)
        if iterated_pth_power(D, n - 1) != target:
            logger.error(f"p^(n-1)-th power of {D!r} is not d^(p^{n - 1})")
            return False
    return True


def classification_invariance_check(elements: Sequence[PEnvelopeElement], rng: np.random.Generator) -> Dict[str, int]:
    """class(Phi(D)) == class(D) for a random admissible Phi per element."""
    agreed, disagreed = 0, 0
    for D in elements:
        phi = random_admissible(D.shape, rng)
        before, after = classify_nilpotent(D).tag, classify_nilpotent(phi(D)).tag
        if before == after:
            agreed += 1
        else:
            disagreed += 1
            logger.error(f"Class changed from {before} to {after} under {phi.coeffs}")
    return {"agreed": agreed, "disagreed": disagreed}


def conjugate_of_partial(shape: AlgebraShape, rng: np.random.Generator, alphas: Sequence[int] = ()) -> PEnvelopeElement:
    """Phi(d + sum alpha_i d^{p^i}) for a random admissible Phi: a regular nilpotent element."""
    shape = shape.with_split(None)
    D = PEnvelopeElement(shape, DPElement.one(shape), alphas)
    return random_admissible(shape, rng)(D)


def centralizer_check(shape: AlgebraShape, rng: np.random.Generator) -> Dict[str, object]:
    """Centralizer of d + sum lambda_i d^{p^i}: dimension 1 in W(1;n), n in W(1;n)_p."""
    shape = shape.with_split(None)
    p, n = shape.p, shape.n[0]
    lambdas = [int(c) for c in rng.integers(0, p, size=n - 1)]
    D = PEnvelopeElement(shape, DPElement.one(shape), lambdas)
    realization = lp_realization(shape)
    in_witt = centralizer_dimension(D, realization.witt_basis())
    in_envelope = centralizer_dimension(D)
    report = {"lambdas": lambdas, "in_witt": in_witt, "in_envelope": in_envelope,
              "passed": in_witt == 1 and in_envelope == n}
    if not report["passed"]:
        logger.error(f"Centralizer check failed: {report}")
    return report

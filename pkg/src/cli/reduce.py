"""
Normal-Form Reductions
======================

Runs one reduction on a user-supplied or randomly generated element and
replays the serialized chain:

    demushkin   witt, W(m;1)              z outside W_(0) to its Demushkin form
    premet      witt, W(m;1), m <= 3      regular nilpotent y to the standard D
    yao-shu     zassenhaus-envelope       alpha_0 d + f d to d + sum l_i x^(p^i - 1) d
    tyurin      zassenhaus-envelope       d^(p^t) + lower terms to x^(p^n - p^t) h(x) d
    semidirect  sl2-semidirect            exp(ad) reduction against lambda d

The replay parses the chain text back, applies it to the input and compares
the result with the reported form, so what is printed is exactly what was
verified.
"""

from typing import Callable, Dict, Optional

import numpy as np

from src.automorphisms import (
    MAX_PREMET_RANK,
    Chain,
    InvalidAutomorphismError,
    ReductionError,
    Scale,
    Shift,
    Swap,
    demushkin_reduce,
    premet_regular_reduce,
)
from src.cartan_algebras import DerivationElement, regular_nilpotent_derivation
from src.cli.families import AlgebraFamily
from src.divided_power import DPElement, monomials
from src.semidirect import SemidirectElement, random_element, semi_reduce
from src.utils.logging_config import get_logger
from src.zassenhaus import PEnvelopeElement, tyurin_reduce, yao_shu_reduce

logger = get_logger(__name__)

REDUCTION_FAMILIES = {
    "demushkin": "witt",
    "premet": "witt",
    "yao-shu": "zassenhaus-envelope",
    "tyurin": "zassenhaus-envelope",
    "semidirect": "sl2-semidirect",
}

# random inputs tried before giving up on a default element
DEFAULT_INPUT_ATTEMPTS = 25


def _sparse_poly(shape, rng: np.random.Generator, keep: Callable, density: float = 0.4) -> DPElement:
    p = shape.p
    terms = {a: int(rng.integers(1, p)) for a in monomials(shape) if keep(a) and rng.random() < density}
    return DPElement(shape, terms)


def _demushkin_input(family: AlgebraFamily, rng: np.random.Generator) -> DerivationElement:
    shape = family.shape
    coeffs = [_sparse_poly(shape, rng, lambda a: sum(a) >= 1) for _ in range(shape.m)]
    return DerivationElement.partial(shape, 0) + DerivationElement(shape, coeffs)


def _premet_input(family: AlgebraFamily, rng: np.random.Generator) -> DerivationElement:
    """A random conjugate of the standard regular nilpotent derivation."""
    shape, p, m = family.shape, family.p, family.shape.m
    chain = Chain()
    for _ in range(2 * m):
        i = int(rng.integers(1, m + 1))
        roll = rng.random()
        if roll < 0.2 and m > 1:
            j = int(rng.integers(1, m + 1))
            if j != i:
                chain = chain.then(Swap(i, j))
        elif roll < 0.5:
            chain = chain.then(Scale(i, int(rng.integers(1, p))))
        else:
            g = _sparse_poly(shape, rng, lambda a: sum(a) >= 1 and a[i - 1] == 0, density=0.2)
            if not g.is_zero():
                chain = chain.then(Shift(i, g))
    return chain.apply(regular_nilpotent_derivation(shape))


def _yao_shu_input(family: AlgebraFamily, rng: np.random.Generator) -> PEnvelopeElement:
    shape = family.shape
    poly = _sparse_poly(shape, rng, lambda a: a[0] >= 1)
    return PEnvelopeElement(shape, poly + DPElement.constant(shape, int(rng.integers(1, family.p))))


def _tyurin_input(family: AlgebraFamily, rng: np.random.Generator, t: int) -> PEnvelopeElement:
    shape = family.shape
    tails = [0] * (family.n - 1)
    tails[t - 1] = 1
    for i in range(t - 1):
        tails[i] = int(rng.integers(0, family.p))
    return PEnvelopeElement(shape, _sparse_poly(shape, rng, lambda a: True, density=0.2), tails)


def _semidirect_input(family: AlgebraFamily, rng: np.random.Generator) -> SemidirectElement:
    lam = int(rng.integers(1, family.p))
    tail = DerivationElement.partial(family.shape, 0).scale(lam)
    return random_element(family.ambient, rng, density=0.6, tail=tail)


def _reduce(family: AlgebraFamily, which: str, x, t: Optional[int]):
    """(chain, form, details) for one reduction."""
    if which == "demushkin":
        result = demushkin_reduce(x)
        return result.chain, result.normal_form, {"phis": [phi.serialize() for phi in result.phis]}
    if which == "premet":
        chain, target = premet_regular_reduce(x)
        return chain, target, {}
    if which == "yao-shu":
        result = yao_shu_reduce(x)
        return result.chain, result.form, {"l": list(result.ls), "reaches_partial": result.reaches_partial}
    if which == "tyurin":
        result = tyurin_reduce(x, t)
        return result.chain, result.form, {"t": result.t, "betas": list(result.betas), "mu": list(result.mus),
                                           "h": result.h.serialize()}
    result = semi_reduce(x)
    return result.chain, result.form, {"s": result.s, "lambda": result.lam, "s0": list(result.s0)}


def _check_applicable(family: AlgebraFamily, which: str, t: Optional[int]):
    if which not in REDUCTION_FAMILIES:
        raise ValueError(f"Unknown reduction {which!r}; choose one of {', '.join(REDUCTION_FAMILIES)}")
    if REDUCTION_FAMILIES[which] != family.name:
        raise ValueError(f"The {which} reduction runs on the {REDUCTION_FAMILIES[which]} family, not {family.name}")
    if which in ("demushkin", "premet") and not family.shape.is_truncated():
        raise ValueError(f"The {which} reduction needs all heights equal to 1, got {family.heights}")
    if which == "premet" and family.shape.m > MAX_PREMET_RANK:
        raise ValueError(f"The premet reduction is capped at m = {MAX_PREMET_RANK}, got m = {family.shape.m}")
    if which == "tyurin" and t is not None and not 1 <= t <= family.n - 1:
        raise ValueError(f"t must lie in 1..{family.n - 1}, got {t}")


def _default_input(family: AlgebraFamily, which: str, rng: np.random.Generator, t: Optional[int]):
    builders = {
        "demushkin": lambda: _demushkin_input(family, rng),
        "premet": lambda: _premet_input(family, rng),
        "yao-shu": lambda: _yao_shu_input(family, rng),
        "tyurin": lambda: _tyurin_input(family, rng, t or family.n - 1),
        "semidirect": lambda: _semidirect_input(family, rng),
    }
    return builders[which]()


def replay_chain(family: AlgebraFamily, chain_text: str, x, form) -> bool:
    """Parse ``chain_text`` back and check that it takes ``x`` to ``form``."""
    parser = family.parse if family.name == "sl2-semidirect" else None
    chain = Chain.parse(chain_text, family.shape, parser)
    return family.serialize(chain.apply(x)) == family.serialize(form)


def run_reduction(family: AlgebraFamily, which: str, element_text: Optional[str] = None,
                  rng: Optional[np.random.Generator] = None, t: Optional[int] = None) -> Dict[str, object]:
    """
    Reduce the given element, or a random one from ``rng`` when none is given.

    Library errors (PreconditionError, ReductionError) on a supplied element
    propagate; for random inputs up to DEFAULT_INPUT_ATTEMPTS candidates are
    tried.
    """
    _check_applicable(family, which, t)
    if element_text is not None:
        x = family.parse(element_text)
        chain, form, details = _reduce(family, which, x, t)
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        for attempt in range(1, DEFAULT_INPUT_ATTEMPTS + 1):
            try:
                x = _default_input(family, which, rng, t)
                chain, form, details = _reduce(family, which, x, t)
                break
            except (ReductionError, InvalidAutomorphismError) as exc:
                logger.warning(f"Random input {attempt} for {which} rejected: {exc}")
        else:
            raise ReductionError(f"No random input for {which} reduced within {DEFAULT_INPUT_ATTEMPTS} attempts")

    chain_text = chain.serialize()
    replay = replay_chain(family, chain_text, x, form)
    if not replay:
        logger.error(f"Replaying the {which} chain does not reproduce the reported form")
    logger.info(f"{which} reduction on {family.label()}: {len(chain)} moves, replay {'ok' if replay else 'FAILED'}")
    return {
        "which": which,
        "algebra": family.label(),
        "input": family.serialize(x),
        "chain": chain_text.splitlines(),
        "moves": len(chain),
        "form": family.serialize(form),
        "replay": replay,
        "details": details,
    }

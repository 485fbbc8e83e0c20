"""
Nilpotency in the Semidirect Product
====================================

Two verdicts for every element: the direct one (the operator on S x O(m;1) is
nilpotent) and the structural criterion

* tail not nilpotent: D is not nilpotent;
* tail nilpotent and in W_(0): D is nilpotent iff its constant S-part is;
* otherwise: bring the tail to lambda d_0 + u, reduce, and D is nilpotent iff
  the S-vector s_0' in front of x_1^{p-1} ... x_s^{p-1} is.

The two must agree; a disagreement is raised as ConsistencyError.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional

from joblib import Parallel, delayed

from src.automorphisms import InvalidAutomorphismError, dform_reduce
from src.cartan_algebras import derivation_filtration_degree
from src.restricted import is_nilpotent
from src.semidirect.algebra import SemidirectElement
from src.semidirect.reduce import dform_split, semi_reduce
from src.semidirect.salgebra import SVector
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class ConsistencyError(RuntimeError):
    """The direct nilpotency test and the structural criterion disagree."""


@dataclass(frozen=True)
class NilpotencyVerdict:
    """``rule`` names the branch of the criterion that decided."""

    direct: bool
    criterion: Optional[bool]
    rule: str
    s0: Optional[SVector] = None
    s: Optional[int] = None

    def __bool__(self):
        return self.direct

    def agrees(self) -> bool:
        return self.criterion is None or self.criterion == self.direct


def _tail_in_w0(D: SemidirectElement) -> bool:
    return D.tail.is_zero() or derivation_filtration_degree(D.tail) >= 0


def nilpotency_criterion(D: SemidirectElement) -> NilpotencyVerdict:
    """Structural verdict only; ``direct`` is left False."""
    salg = D.ambient.salg
    if not is_nilpotent(D.tail):
        return NilpotencyVerdict(False, False, "tail not nilpotent")
    if _tail_in_w0(D):
        s0 = D.constant_part()
        return NilpotencyVerdict(False, salg.is_nilpotent(s0), "tail in W_(0)", s0=s0)
    current = D
    if dform_split(D.tail) is None:
        try:
            current = dform_reduce(D.tail).chain.apply(D)
        except InvalidAutomorphismError:
            logger.warning("Tail cannot be brought to d_0 + u inside D; criterion unavailable")
            return NilpotencyVerdict(False, None, "direct only")
    reduced = semi_reduce(current)
    return NilpotencyVerdict(False, salg.is_nilpotent(reduced.s0), "reduced form", s0=reduced.s0, s=reduced.s)


def semi_is_nilpotent(D: SemidirectElement) -> NilpotencyVerdict:
    """Direct and structural nilpotency verdicts; truthiness is the direct one."""
    direct = is_nilpotent(D)
    criterion = nilpotency_criterion(D)
    verdict = NilpotencyVerdict(direct, criterion.criterion, criterion.rule, criterion.s0, criterion.s)
    if not verdict.agrees():
        logger.error(f"Nilpotency verdicts disagree on {D!r}: direct={direct}, {verdict.rule}={verdict.criterion}")
        raise ConsistencyError(f"direct={direct} but criterion ({verdict.rule}) = {verdict.criterion}")
    return verdict


def nilpotency_survey(elements: Iterable[SemidirectElement], n_jobs: int = 1) -> List[NilpotencyVerdict]:
    """semi_is_nilpotent over a batch, on joblib worker threads."""
    elements = list(elements)
    logger.info(f"Nilpotency survey of {len(elements)} elements on {n_jobs} worker(s)")
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(semi_is_nilpotent)(D) for D in elements)

"""
Nilpotent Point Counting
========================

Counts the F_p-points of the nilpotent variety of a family two ways: the
direct operator test and the family's structural criterion. In ``enumerate``
mode every coefficient vector is visited; in ``sample`` mode point ``i`` is
drawn from the substream ``(seed, i)``, so the counts do not depend on the
worker count. Every nilpotent point found is also checked to stay nilpotent
under scaling.
"""

import math
import time
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from src.cli.config import ENUMERATION_GUARD
from src.cli.families import build_algebra
from src.utils.logging_config import get_logger
from src.utils.rng import substream

logger = get_logger(__name__)

MODES = ("enumerate", "sample")


class GuardExceededError(ValueError):
    """Enumeration would exceed the operator-test budget."""


@dataclass
class CountReport:
    family: str
    mode: str
    dimension: int
    scanned: int
    nilpotent: int
    criterion: int
    undecided: int
    agreement: bool
    conical: bool
    elapsed: float
    log_q_estimate: Optional[float]

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        """Report fields; ``elapsed`` only with ``timings`` so that reruns are byte-identical."""
        record = asdict(self)
        if not timings:
            record.pop("elapsed")
        return record

    @property
    def passed(self) -> bool:
        return self.agreement and self.conical


def _decode(index: int, p: int, length: int) -> np.ndarray:
    digits = np.zeros(length, dtype=np.int64)
    for k in range(length):
        index, digits[k] = divmod(index, p)
    return digits


def _count_chunk(key: Tuple, mode: str, seed: int, start: int, stop: int) -> Tuple[int, int, int, int, int]:
    """(nilpotent, criterion, undecided, disagreements, non-conical) on points start..stop-1."""
    family = build_algebra(*key)
    p, dim = family.p, family.size
    nilpotent = criterion = undecided = disagreements = non_conical = 0
    for index in range(start, stop):
        if mode == "enumerate":
            coords = _decode(index, p, dim)
        else:
            coords = substream(seed, index).integers(0, p, size=dim)
        x = family.element(coords)
        direct = family.is_nilpotent(x)
        verdict = family.criterion(x)
        if verdict is None:
            undecided += 1
            verdict = direct
        nilpotent += direct
        criterion += verdict
        if verdict != direct:
            disagreements += 1
            logger.error(f"Counting routes disagree on point {index}: direct={direct}, criterion={verdict}")
        if direct and not all(family.is_nilpotent(x.scale(c)) for c in range(2, p)):
            non_conical += 1
            logger.error(f"Nilpotent point {index} leaves the variety under scaling")
    return nilpotent, criterion, undecided, disagreements, non_conical


def count_nilpotent(family_key: Tuple, mode: str = "enumerate", samples: int = 1000, seed: int = 0,
                    n_jobs: int = 1, chunks: Optional[int] = None) -> CountReport:
    """
    Count nilpotent points of the family ``family_key`` = (family, p, M, heights).

    Raises GuardExceededError when enumeration would test more than
    ENUMERATION_GUARD points.
    """
    if mode not in MODES:
        raise ValueError(f"Unknown counting mode {mode!r}; choose one of {', '.join(MODES)}")
    family = build_algebra(*family_key)
    p, dim = family.p, family.size
    if mode == "enumerate":
        # compare exponents first: p**dim is astronomically large for most families
        if dim * math.log(p) > math.log(ENUMERATION_GUARD):
            logger.error(f"Enumerating {family.label()} needs {p}^{dim} operator tests")
            raise GuardExceededError(f"{p}^{dim} points exceed the enumeration guard of {ENUMERATION_GUARD}")
        total = p**dim
    else:
        if samples < 1:
            raise ValueError(f"Sample count must be positive, got {samples}")
        total = samples

    start_time = time.time()
    chunks = chunks or max(1, n_jobs) * 4
    bounds = np.linspace(0, total, chunks + 1, dtype=np.int64)
    logger.info(f"Counting nilpotent points of {family.label()}: {mode}, {total} points, {n_jobs} worker(s)")
    results = Parallel(n_jobs=n_jobs)(
        delayed(_count_chunk)(family.key, mode, seed, int(lo), int(hi))
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    )
    nilpotent = sum(r[0] for r in results)
    criterion = sum(r[1] for r in results)
    undecided = sum(r[2] for r in results)
    disagreements = sum(r[3] for r in results)
    non_conical = sum(r[4] for r in results)

    if mode == "enumerate":
        estimate = math.log(nilpotent, p) if nilpotent else None
    else:
        estimate = dim + math.log(nilpotent / total, p) if nilpotent else None

    report = CountReport(
        family=family.name,
        mode=mode,
        dimension=dim,
        scanned=total,
        nilpotent=nilpotent,
        criterion=criterion,
        undecided=undecided,
        agreement=nilpotent == criterion and disagreements == 0,
        conical=non_conical == 0,
        elapsed=round(time.time() - start_time, 3),
        log_q_estimate=None if estimate is None else round(estimate, 4),
    )
    if report.agreement and report.conical:
        logger.info(f"Count complete: {nilpotent} of {total} nilpotent, both routes agree")
    else:
        logger.error(f"Count check failed: {report}")
    return report

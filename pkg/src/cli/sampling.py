"""
Constrained Sampling
====================

Rejection sampling of family elements. Sample ``i`` draws all its attempts
from the substream ``(seed, i)``; a worker returns the serialized element, so
outputs are identical for any worker count. Every accepted element is
re-parsed and its constraint re-checked before it is emitted.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from joblib import Parallel, delayed

from src.cli.families import build_algebra
from src.utils.logging_config import get_logger
from src.utils.rng import substream

logger = get_logger(__name__)


class SamplingBudgetError(RuntimeError):
    """No candidate met the constraint within the retry budget."""


@dataclass(frozen=True)
class Sample:
    index: int
    element: str
    attempts: int


def _draw(key: Tuple, constraint: str, seed: int, index: int, budget: int) -> Tuple[Optional[str], int]:
    family = build_algebra(*key)
    rng = substream(seed, index)
    for attempt in range(1, budget + 1):
        candidate = family.propose(rng, constraint)
        if family.satisfies(candidate, constraint):
            return family.serialize(candidate), attempt
    return None, budget


def sample_elements(family_key: Tuple, constraint: str = "any", count: int = 10, seed: int = 0,
                    budget: int = 200, n_jobs: int = 1) -> List[Sample]:
    """
    ``count`` elements meeting ``constraint``.

    Raises ValueError for constraints the family does not support and
    SamplingBudgetError when some sample exhausts ``budget`` attempts.
    """
    family = build_algebra(*family_key)
    if constraint not in family.constraints:
        raise ValueError(f"Constraint {constraint!r} is not supported for {family.name}; "
                         f"choose one of {', '.join(family.constraints)}")
    logger.info(f"Sampling {count} {constraint} elements of {family.label()} on {n_jobs} worker(s)")
    drawn = Parallel(n_jobs=n_jobs)(
        delayed(_draw)(family.key, constraint, seed, index, budget) for index in range(count)
    )
    samples = []
    for index, (text, attempts) in enumerate(drawn):
        if text is None:
            logger.error(f"Sample {index}: no {constraint} element within {budget} attempts")
            raise SamplingBudgetError(f"Sample {index} exhausted the retry budget of {budget} for {constraint!r}")
        element = family.parse(text)
        if family.serialize(element) != text:
            raise RuntimeError(f"Sample {index} does not survive a serialization round trip")
        if not family.satisfies(element, constraint):
            raise RuntimeError(f"Sample {index} no longer satisfies {constraint!r} after parsing")
        samples.append(Sample(index, text, attempts))
    logger.info(f"Sampled {len(samples)} elements, {sum(s.attempts for s in samples)} attempts in total")
    return samples

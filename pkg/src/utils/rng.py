"""
Seeded random streams.

Every sampled object is drawn from its own PCG64 stream keyed by
``(seed, index)``, so results do not depend on how work is split across
workers.
"""

from typing import Iterator

import numpy as np


def substream(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def substreams(seed: int, count: int, start: int = 0) -> Iterator[np.random.Generator]:
    for index in range(start, start + count):
        yield substream(seed, index)

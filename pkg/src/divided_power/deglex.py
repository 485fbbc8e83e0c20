"""
DegLex ordering on multi-indices.

|a|_p weights the first s exponents by 1, p, ..., p^{s-1} and every later one
by p^s; ties are broken lexicographically from the last variable down.
"""

from typing import Optional, Sequence, Tuple

MultiIndex = Tuple[int, ...]


def p_degree(a: Sequence[int], s: int, p: int) -> int:
    """|a|_p = sum_{i<=s} a_i p^{i-1} + p^s sum_{i>s} a_i."""
    head = sum(ai * p**i for i, ai in enumerate(a[:s]))
    return head + p**s * sum(a[s:])


def deglex_key(a: Sequence[int], s: int, p: int) -> Tuple[int, MultiIndex]:
    return p_degree(a, s, p), tuple(reversed(tuple(a)))


def deglex_compare(a: Sequence[int], b: Sequence[int], s: int, p: int) -> int:
    """-1, 0 or 1 as a precedes, equals or follows b."""
    if len(a) != len(b):
        raise ValueError(f"Multi-indices of different length: {a}, {b}")
    if not 1 <= s <= len(a):
        raise ValueError(f"Split index {s} outside 1..{len(a)}")
    ka, kb = deglex_key(a, s, p), deglex_key(b, s, p)
    return (ka > kb) - (ka < kb)


def deglex_min(indices, s: int, p: int) -> Optional[MultiIndex]:
    """DegLex-least element of an iterable of multi-indices (None if empty)."""
    return min(indices, key=lambda a: deglex_key(a, s, p), default=None)

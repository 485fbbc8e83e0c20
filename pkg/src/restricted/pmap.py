"""
p-th Power Map
==============

The [p]-map of a registered algebra is the p-th power of the operator on its
faithful module, decomposed back into the algebra. On top of it: Jacobson's
s_i terms, nilpotency, the semisimple rank, regularity of derivations of
O(m;1), centralizers and Jordan block profiles.
"""

from collections import Counter
from typing import Dict, List, Optional

import galois
import numpy as np

from src.cartan_algebras import DerivationElement
from src.restricted.realization import commutator, realization_for
from src.utils.linalg import EchelonBasis, as_ints, is_zero, matrix_power, rank
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class NotNilpotentError(ValueError):
    """An operation needing a nilpotent element got a non-nilpotent one."""


def pth_power(x):
    """x^[p]; raises NotInSpanError if the operator power leaves the algebra."""
    realization = realization_for(x)
    op = realization.operator(x)
    return realization.decompose(matrix_power(op, realization.field.characteristic))


def iterated_pth_power(x, times: int):
    """x^[p]^times."""
    realization = realization_for(x)
    p = realization.field.characteristic
    op = realization.operator(x)
    for _ in range(times):
        op = matrix_power(op, p)
    return realization.decompose(op)


def jacobson_si(D, E) -> List:
    """
    The terms s_1(D,E), ..., s_{p-1}(D,E).

    ad(tD + E)^{p-1}(D) is expanded as a polynomial in t with operator
    coefficients; s_i is the coefficient of t^{i-1} divided by i.
    """
    realization = realization_for(D)
    if realization_for(E) is not realization:
        raise ValueError("Jacobson terms need elements of the same algebra")
    field = realization.field
    p = field.characteristic
    d_op, e_op = realization.operator(D), realization.operator(E)
    coeffs = [d_op]
    for _ in range(p - 1):
        zero = field.Zeros(d_op.shape)
        step = [zero.copy() for _ in range(len(coeffs) + 1)]
        for j, X in enumerate(coeffs):
            step[j] = step[j] + commutator(e_op, X)
            step[j + 1] = step[j + 1] + commutator(d_op, X)
        coeffs = step
    terms = []
    for i in range(1, p):
        terms.append(realization.decompose(coeffs[i - 1] * field(pow(i, -1, p))))
    return terms


def jacobson_sum_check(D, E) -> bool:
    """(D + E)^[p] == D^[p] + E^[p] + sum_i s_i(D, E)."""
    total = pth_power(D) + pth_power(E)
    for term in jacobson_si(D, E):
        total = total + term
    return total == pth_power(D + E)


def adjoint_matrix(x) -> galois.FieldArray:
    """Matrix of ad x on the algebra basis (columns are images)."""
    realization = realization_for(x)
    columns = [realization.coordinates(realization.bracket(x, b)) for b in realization.basis()]
    return realization.field(np.column_stack([as_ints(c) for c in columns]))


def ad_power_check(x) -> bool:
    """ad(x^[p]) == (ad x)^p."""
    p = realization_for(x).field.characteristic
    return np.array_equal(as_ints(adjoint_matrix(pth_power(x))), as_ints(matrix_power(adjoint_matrix(x), p)))


def semilinearity_check(x, c: int) -> bool:
    """(c x)^[p] == c^p x^[p] for a prime-field scalar c."""
    p = realization_for(x).field.characteristic
    return pth_power(x.scale(c)) == pth_power(x).scale(pow(c, p, p))


def nilpotency_index(x) -> Optional[int]:
    """Least N with x^[p]^N = 0, or None when x is not nilpotent."""
    realization = realization_for(x)
    op = realization.operator(x)
    p = realization.field.characteristic
    index, reach = 0, 1
    while not is_zero(op):
        if reach >= op.shape[0]:
            return None
        op = matrix_power(op, p)
        index += 1
        reach *= p
    return index


def is_nilpotent(x) -> bool:
    return nilpotency_index(x) is not None


def _stable_start(dim: int, p: int) -> int:
    """Smallest K with p^K >= dim; from there on p-powers only see the semisimple part."""
    start = 1
    while p**start < dim:
        start += 1
    return start


def semisimple_rank(x) -> int:
    """Dimension of span{x^[p]^i : i >= K} once the nilpotent part has died out."""
    realization = realization_for(x)
    field = realization.field
    p = field.characteristic
    op = realization.operator(x)
    dim = op.shape[0]
    start = _stable_start(dim, p)
    for _ in range(start):
        op = matrix_power(op, p)
    span = EchelonBasis(field, dim * dim)
    for _ in range(2 * dim):
        if not span.add(op.reshape(-1)):
            break
        op = matrix_power(op, p)
    logger.debug(f"Semisimple rank {span.rank} (start {start}, dim {dim})")
    return span.rank


def is_regular_witt(D: DerivationElement) -> bool:
    """Kernel of D on O(m;1) is exactly the constants."""
    if not D.shape.is_truncated():
        raise ValueError(f"Regularity is tested in W(m;1), got {D.shape!r}")
    op = realization_for(D).operator(D)
    return rank(op) == D.shape.dim - 1


def centralizer_dimension(x, basis: Optional[List] = None) -> int:
    """dim of the kernel of ad x on the span of ``basis`` (default: the whole algebra)."""
    realization = realization_for(x)
    elements = realization.basis() if basis is None else basis
    rows = [as_ints(realization.operator(realization.bracket(x, b))).reshape(-1) for b in elements]
    return len(elements) - rank(realization.field(np.vstack(rows)))


def operator_rank_sequence(x, upto: Optional[int] = None) -> List[int]:
    """rank(X^k) for k = 0..upto (default: the module dimension)."""
    realization = realization_for(x)
    op = realization.operator(x)
    dim = op.shape[0]
    upto = dim if upto is None else upto
    ranks, power = [], realization.field.Identity(dim)
    for _ in range(upto + 1):
        ranks.append(rank(power))
        power = power @ op
    return ranks


def jordan_block_profile(x) -> Dict[int, int]:
    """Block size -> count for a nilpotent operator, from the rank sequence."""
    ranks = operator_rank_sequence(x)
    if ranks[-1] != 0:
        raise NotNilpotentError("Jordan block profile needs a nilpotent operator")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    profile = Counter()
    for size in range(1, len(at_least) + 1):
        exact = at_least[size - 1] - (at_least[size] if size < len(at_least) else 0)
        if exact:
            profile[size] = exact
    return dict(profile)

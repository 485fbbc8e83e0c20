"""
Restricted structure: p-th powers on faithful realizations, Jacobson terms,
p-closures, Jordan-Chevalley decomposition and psi-relations.
"""

from .closure import closure_check, p_closure
from .jordan import jordan_chevalley, semisimple_part, squarefree_radical
from .pmap import (
    NotNilpotentError,
    ad_power_check,
    adjoint_matrix,
    centralizer_dimension,
    is_nilpotent,
    is_regular_witt,
    iterated_pth_power,
    jacobson_si,
    jacobson_sum_check,
    jordan_block_profile,
    nilpotency_index,
    operator_rank_sequence,
    pth_power,
    semilinearity_check,
    semisimple_rank,
)
from .psi import PsiCoefficients, PsiRelationError, psi_relation
from .realization import (
    OperatorMatrix,
    OperatorSpanAlgebra,
    Realization,
    SpanElement,
    UnregisteredAlgebraError,
    WittRealization,
    as_operator,
    commutator,
    realization_for,
    witt_realization,
)

__all__ = [
    "closure_check",
    "p_closure",
    "jordan_chevalley",
    "semisimple_part",
    "squarefree_radical",
    "NotNilpotentError",
    "ad_power_check",
    "adjoint_matrix",
    "centralizer_dimension",
    "is_nilpotent",
    "is_regular_witt",
    "iterated_pth_power",
    "jacobson_si",
    "jacobson_sum_check",
    "jordan_block_profile",
    "nilpotency_index",
    "operator_rank_sequence",
    "pth_power",
    "semilinearity_check",
    "semisimple_rank",
    "PsiCoefficients",
    "PsiRelationError",
    "psi_relation",
    "OperatorMatrix",
    "OperatorSpanAlgebra",
    "Realization",
    "SpanElement",
    "UnregisteredAlgebraError",
    "WittRealization",
    "as_operator",
    "commutator",
    "realization_for",
    "witt_realization",
]

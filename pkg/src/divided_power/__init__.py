"""
Divided power algebras O(m;n) and the DegLex ordering.
"""

from .algebra import (
    AlgebraShape,
    DPElement,
    MultiIndex,
    NotAUnitError,
    ShapeMismatchError,
    ZeroElementError,
    dp_divided_power,
    dp_embed,
    dp_filtration_degree,
    dp_infinite_degree,
    dp_inverse,
    dp_mul,
    dp_partial,
    dp_power,
    dp_restrict,
    monomials,
    multiplication_matrix,
    ordinary_monomial,
    partial_matrix,
    product_table,
)
from .deglex import deglex_compare, deglex_key, deglex_min, p_degree

__all__ = [
    "AlgebraShape",
    "DPElement",
    "MultiIndex",
    "NotAUnitError",
    "ShapeMismatchError",
    "ZeroElementError",
    "dp_divided_power",
    "dp_embed",
    "dp_filtration_degree",
    "dp_infinite_degree",
    "dp_inverse",
    "dp_mul",
    "dp_partial",
    "dp_power",
    "dp_restrict",
    "monomials",
    "multiplication_matrix",
    "ordinary_monomial",
    "partial_matrix",
    "product_table",
    "deglex_compare",
    "deglex_key",
    "deglex_min",
    "p_degree",
]

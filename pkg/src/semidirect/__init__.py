"""
Semidirect products (S x O(m;1)) x| D: arithmetic, p-map, exp(ad) reduction
and nilpotency criteria.
"""

from .algebra import (
    SemidirectElement,
    SemidirectProduct,
    SemidirectRealization,
    random_element,
    semi_bracket,
    semi_pth,
    tensor_sum,
)
from .checks import (
    autg1_element,
    autg1_power_check,
    d0_image_check,
    expad_formula_check,
    g_dimension_check,
    ideal_derivations_check,
    nilpotency_bound_check,
    pure_pth_check,
    random_ideal_derivation,
    sl2_line,
    torus_power_check,
    z_power_check,
)
from .nilpotency import ConsistencyError, NilpotencyVerdict, nilpotency_criterion, nilpotency_survey, semi_is_nilpotent
from .reduce import SemiReduceResult, dform_split, semi_exp_ad, semi_reduce, standard_d0, top_prefix
from .salgebra import SAlgebra, SVector

__all__ = [
    "SemidirectElement",
    "SemidirectProduct",
    "SemidirectRealization",
    "random_element",
    "semi_bracket",
    "semi_pth",
    "tensor_sum",
    "autg1_element",
    "autg1_power_check",
    "d0_image_check",
    "expad_formula_check",
    "g_dimension_check",
    "ideal_derivations_check",
    "nilpotency_bound_check",
    "pure_pth_check",
    "random_ideal_derivation",
    "sl2_line",
    "torus_power_check",
    "z_power_check",
    "ConsistencyError",
    "NilpotencyVerdict",
    "nilpotency_criterion",
    "nilpotency_survey",
    "semi_is_nilpotent",
    "SemiReduceResult",
    "dform_split",
    "semi_exp_ad",
    "semi_reduce",
    "standard_d0",
    "top_prefix",
    "SAlgebra",
    "SVector",
]

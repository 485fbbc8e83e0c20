"""
The Zassenhaus algebra W(1;n), its minimal p-envelope, the e-basis presentation
over F_q, normal forms under admissible automorphisms and the Regular/Singular
split of the nilpotent variety.
"""

from src.automorphisms import lie_g_tangent_check

from .ealgebra import (
    SeparationReport,
    ToralElement,
    TorusCertificate,
    ZassenhausEAlgebra,
    e0_torus,
    in_e_l0,
    sigma_fixed_toral,
    sigma_grading_check,
    sigma_matrix,
    singular_separation_check,
    zass_e_algebra,
)
from .embedding import iota_check, iota_embedding, iota_poly, iota_shape, iota_yao_shu_image
from .envelope import (
    LpRealization,
    PEnvelopeElement,
    as_envelope_element,
    in_l0,
    lower,
    lp_bracket,
    lp_in_filtration,
    lp_pth,
    lp_realization,
    random_envelope_element,
)
from .errors import CertificateError
from .reductions import (
    REGULAR,
    SINGULAR,
    NilpotentClass,
    TyurinResult,
    YaoShuResult,
    centralizer_check,
    classification_invariance_check,
    classify_nilpotent,
    conjugate_of_partial,
    random_admissible,
    regular_witness_check,
    singular_branch,
    singular_branch_check,
    tyurin_reduce,
    yao_shu_form,
    yao_shu_reduce,
)

__all__ = [
    "lie_g_tangent_check",
    "SeparationReport",
    "ToralElement",
    "TorusCertificate",
    "ZassenhausEAlgebra",
    "e0_torus",
    "in_e_l0",
    "sigma_fixed_toral",
    "sigma_grading_check",
    "sigma_matrix",
    "singular_separation_check",
    "zass_e_algebra",
    "iota_check",
    "iota_embedding",
    "iota_poly",
    "iota_shape",
    "iota_yao_shu_image",
    "LpRealization",
    "PEnvelopeElement",
    "as_envelope_element",
    "in_l0",
    "lower",
    "lp_bracket",
    "lp_in_filtration",
    "lp_pth",
    "lp_realization",
    "random_envelope_element",
    "CertificateError",
    "REGULAR",
    "SINGULAR",
    "NilpotentClass",
    "TyurinResult",
    "YaoShuResult",
    "centralizer_check",
    "classification_invariance_check",
    "classify_nilpotent",
    "conjugate_of_partial",
    "random_admissible",
    "regular_witness_check",
    "singular_branch",
    "singular_branch_check",
    "tyurin_reduce",
    "yao_shu_form",
    "yao_shu_reduce",
]

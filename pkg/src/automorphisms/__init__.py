"""
Automorphisms: substitutions of O(m;1), admissible automorphisms of O(1;n),
exp(ad u), replayable reduction chains and the normal-form reductions in W(m;1).
"""

from .admissible import (
    AdmissibleAutomorphism,
    admissibility_check,
    admissible_apply_Lp,
    admissible_apply_poly,
    apply_admissible,
    is_restricted_exponent,
    lie_g_tangent_check,
)
from .chain import AdmissibleMove, Chain, ExpAdMove, Move, Scale, Shift, SubstitutionMove, Swap
from .errors import InvalidAutomorphismError, PreconditionError, ReductionError
from .expad import ExpAdAutomorphism, exp_ad, preserves_structure
from .reductions import (
    MAX_PREMET_RANK,
    DemushkinResult,
    DFormResult,
    demushkin_power_check,
    demushkin_reduce,
    dform_reduce,
    premet_regular_reduce,
    stabilizer_spot_check,
)
from .truncated import TruncatedAutomorphism, conjugate, substitution_images, truncated_conjugate

__all__ = [
    "AdmissibleAutomorphism",
    "admissibility_check",
    "admissible_apply_Lp",
    "admissible_apply_poly",
    "apply_admissible",
    "is_restricted_exponent",
    "lie_g_tangent_check",
    "AdmissibleMove",
    "Chain",
    "ExpAdMove",
    "Move",
    "Scale",
    "Shift",
    "SubstitutionMove",
    "Swap",
    "InvalidAutomorphismError",
    "PreconditionError",
    "ReductionError",
    "ExpAdAutomorphism",
    "exp_ad",
    "preserves_structure",
    "MAX_PREMET_RANK",
    "DemushkinResult",
    "DFormResult",
    "demushkin_power_check",
    "demushkin_reduce",
    "dform_reduce",
    "premet_regular_reduce",
    "stabilizer_spot_check",
    "TruncatedAutomorphism",
    "conjugate",
    "substitution_images",
    "truncated_conjugate",
]

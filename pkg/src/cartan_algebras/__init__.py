"""
Cartan type Lie algebras: W(m;n), the S/H/K constructions and sl_2.
"""

from .sl2 import SL2_LABELS, Sl2Element, sl2_bracket, sl2_is_nilpotent, sl2_pth, sl2_pth_table, sl2_structure_constants
from .special import (
    HamiltonianIndex,
    contact_bracket,
    contact_D_K,
    contact_generators,
    contact_span_dimension,
    expected_contact_dimension,
    expected_hamiltonian_dimension,
    expected_special_dimension,
    hamiltonian_D_H,
    hamiltonian_generators,
    hamiltonian_span_dimension,
    poisson_bracket,
    span_dimension,
    special_D_ij,
    special_generators,
    special_span_dimension,
)
from .witt import (
    DerivationElement,
    derivation_filtration_degree,
    derivation_from_operator,
    derivation_operator_matrix,
    divergence,
    homogeneous_degree,
    in_filtration,
    regular_nilpotent_derivation,
    regular_power_formula,
    witt_apply,
    witt_basis,
    witt_bracket,
    witt_dimension,
)

__all__ = [
    "SL2_LABELS",
    "Sl2Element",
    "sl2_bracket",
    "sl2_is_nilpotent",
    "sl2_pth",
    "sl2_pth_table",
    "sl2_structure_constants",
    "HamiltonianIndex",
    "contact_bracket",
    "contact_D_K",
    "contact_generators",
    "contact_span_dimension",
    "expected_contact_dimension",
    "expected_hamiltonian_dimension",
    "expected_special_dimension",
    "hamiltonian_D_H",
    "hamiltonian_generators",
    "hamiltonian_span_dimension",
    "poisson_bracket",
    "span_dimension",
    "special_D_ij",
    "special_generators",
    "special_span_dimension",
    "DerivationElement",
    "derivation_filtration_degree",
    "derivation_from_operator",
    "derivation_operator_matrix",
    "divergence",
    "homogeneous_degree",
    "in_filtration",
    "regular_nilpotent_derivation",
    "regular_power_formula",
    "witt_apply",
    "witt_basis",
    "witt_bracket",
    "witt_dimension",
]

"""
Scalars: finite fields, p-adic digits and Lucas binomials.
"""

from .finite_field import FieldSpec, FieldElement, ext_field_make, smallest_irreducible, check_prime
from .lucas import PAdicDigits, p_adic_digits, binom_mod_p, factorial_mod_p

__all__ = [
    "FieldSpec",
    "FieldElement",
    "ext_field_make",
    "smallest_irreducible",
    "check_prime",
    "PAdicDigits",
    "p_adic_digits",
    "binom_mod_p",
    "factorial_mod_p",
]

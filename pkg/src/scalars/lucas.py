"""
Lucas Binomials
===============

p-adic digits and binomial coefficients mod p via Lucas' theorem.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Tuple

from src.scalars.finite_field import check_prime
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class PAdicDigits:
    """value = sum digits[K] * base^K, lowest digit first."""

    value: int
    base: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        if sum(d * self.base**k for k, d in enumerate(self.digits)) != self.value:
            raise ValueError(f"Digits {self.digits} do not expand to {self.value}")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("Leading digit must be nonzero")

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, k: int) -> int:
        return self.digits[k] if k < len(self.digits) else 0


def p_adic_digits(a: int, p: int) -> PAdicDigits:
    if a < 0:
        raise ValueError(f"Expected a nonnegative integer, got {a}")
    value, digits = a, []
    while value:
        value, digit = divmod(value, p)
        digits.append(digit)
    return PAdicDigits(a, p, tuple(digits))


@lru_cache(maxsize=1 << 16)
def _binom_mod_p(a: int, b: int, p: int) -> int:
    result = 1
    while b:
        a, a_digit = divmod(a, p)
        b, b_digit = divmod(b, p)
        if b_digit > a_digit:
            return 0
        result = result * comb(a_digit, b_digit) % p
    return result


def binom_mod_p(a: int, b: int, p: int) -> int:
    """C(a, b) mod p as the product of digitwise binomials (0 if any b_i > a_i)."""
    check_prime(p)
    if a < 0 or b < 0:
        raise ValueError(f"Binomial arguments must be nonnegative, got ({a}, {b})")
    return _binom_mod_p(a, b, p)


@lru_cache(maxsize=None)
def factorial_mod_p(n: int, p: int) -> int:
    result = 1
    for k in range(2, n + 1):
        result = result * k % p
    return result

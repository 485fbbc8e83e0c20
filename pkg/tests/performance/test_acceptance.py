import math
import time

import pytest

from src.automorphisms import lie_g_tangent_check
from src.cartan_algebras import (
    contact_span_dimension,
    hamiltonian_span_dimension,
    regular_nilpotent_derivation,
    regular_power_formula,
    special_span_dimension,
    witt_apply,
    witt_basis,
)
from src.cli.config import build_config
from src.cli.counting import count_nilpotent
from src.cli.verify import run_verification
from src.divided_power import DPElement, ordinary_monomial
from src.restricted import iterated_pth_power, operator_rank_sequence, p_closure
from src.scalars import binom_mod_p
from src.zassenhaus import e0_torus, sigma_grading_check, singular_separation_check, zass_e_algebra


@pytest.fixture(scope="module")
def acceptance_config():
    """p = 5, W(1;2)_p over F_25 with the acceptance-size sample counts"""
    return build_config(p=5, M=2, family="zassenhaus-envelope", n=2, seed=2024, workers=2)


def failed_checks(ledger):
    return ledger[ledger["passed"] == False]["check"].tolist()  # noqa: E712


class TestExactReproductions:
    """Acceptance reproductions with fixed expected values"""

    def test_regular_derivation_of_w21(self, o21):
        """Test D^(p^l), D^25 = 0, D^24(x_1^4 x_2^4) = 1 and rank(D^k) = 25 - k"""
        D = regular_nilpotent_derivation(o21)

        assert iterated_pth_power(D, 0) == regular_power_formula(o21, 0)
        assert iterated_pth_power(D, 1) == regular_power_formula(o21, 1)
        assert iterated_pth_power(D, 2).is_zero()
        value = ordinary_monomial(o21, (4, 4))
        for _ in range(24):
            value = witt_apply(D, value)
        assert value == DPElement.one(o21)
        assert operator_rank_sequence(D) == [25 - k for k in range(26)]

    def test_lucas_sweep(self):
        """Test binom_mod_p against big integers for 0 <= b <= a < 625 and the p^r - p^s corner cases"""
        start = time.time()
        mismatches = [(a, b) for a in range(625) for b in range(a + 1) if binom_mod_p(a, b, 5) != math.comb(a, b) % 5]

        assert mismatches == []
        assert all(binom_mod_p(5**r - 5**s + i, 5**r - 5**s, 5) == 1
                   for r in range(2, 5) for s in range(1, r) for i in range(5**s))
        print(f"Lucas sweep: {time.time() - start:.2f}s")

    def test_minimal_p_envelope(self, o12):
        """Test dim of the p-closure of W(1;2) = 26"""
        assert p_closure(witt_basis(o12)).dimension() == 26

    def test_cartan_dimension_table(self, o21, o31):
        """Test the S, H and K span dimensions 248, 23 and 125 at p = 5"""
        start = time.time()

        assert special_span_dimension(o31) == 248
        assert hamiltonian_span_dimension(o21) == 23
        assert contact_span_dimension(o31) == 125
        print(f"Cartan dimension table: {time.time() - start:.2f}s")

    def test_witt_brute_force(self):
        """Test all 3125 points of W(1;1): both counts agree and the set is conical"""
        report = count_nilpotent(("witt", 5, 1, (1,)), mode="enumerate", n_jobs=2)

        assert report.scanned == 3125
        assert report.agreement
        assert report.conical
        print(f"W(1;1): {report.nilpotent} nilpotent of {report.scanned}, log_5 = {report.log_q_estimate}")

    def test_zassenhaus_suite(self, o12):
        """Test the torus, sigma, Lie(G) and the 15625-point separation at p = 5, n = 2, M = 2"""
        zalg = zass_e_algebra(5, 2, 2)
        certificate = e0_torus(zalg)
        assert certificate.passed
        assert certificate.semisimple_rank == 2
        assert sigma_grading_check(zalg)["passed"]

        tangents = lie_g_tangent_check(o12)
        assert tangents["dimension"] == 23
        assert tangents["passed"]

        separation = singular_separation_check(5, 2, 2, n_jobs=2)
        assert separation.points == 15625
        assert separation.passed


class TestFullLedger:
    """Every verification suite at acceptance size"""

    @pytest.mark.parametrize("suite", ["scalars", "cartan", "restricted", "automorphisms", "semidirect",
                                       "zassenhaus"])
    def test_suite(self, acceptance_config, suite):
        """Test that no check of the suite fails"""
        start = time.time()
        ledger = run_verification(acceptance_config, suite=suite, full=True)

        assert failed_checks(ledger) == []
        assert ledger["passed"].notna().all()
        print(f"{suite}: {len(ledger)} checks in {time.time() - start:.1f}s")

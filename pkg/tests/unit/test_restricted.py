import pytest

from src.cartan_algebras import (
    DerivationElement,
    Sl2Element,
    regular_power_formula,
    witt_basis,
    witt_bracket,
)
from src.restricted import (
    NotNilpotentError,
    PsiRelationError,
    UnregisteredAlgebraError,
    ad_power_check,
    as_operator,
    centralizer_dimension,
    closure_check,
    is_nilpotent,
    is_regular_witt,
    iterated_pth_power,
    jacobson_si,
    jacobson_sum_check,
    jordan_block_profile,
    jordan_chevalley,
    nilpotency_index,
    operator_rank_sequence,
    p_closure,
    psi_relation,
    pth_power,
    realization_for,
    semilinearity_check,
    semisimple_rank,
)
from src.utils.linalg import NotInSpanError


def random_derivation(shape, rng, density=0.4):
    values = rng.integers(0, shape.p, size=shape.m * shape.dim)
    values[rng.random(values.size) > density] = 0
    return DerivationElement.from_dense(shape, values)


class TestPthPower:
    """Unit tests for the p-map of W(m;n)"""

    def test_partial_is_nilpotent(self, o11, o12):
        """Test d^p = 0 on O(1;1) and d^p outside W(1;2)"""
        d = DerivationElement.partial(o11, 0)
        assert pth_power(d).is_zero()
        with pytest.raises(NotInSpanError):
            pth_power(DerivationElement.partial(o12, 0))

    def test_euler_is_toral(self, o11, o21):
        """Test (x d)^[p] = x d"""
        x_d = DerivationElement.monomial(o11, (1,), 0)
        assert pth_power(x_d) == x_d

        euler = DerivationElement.monomial(o21, (1, 0), 0) + DerivationElement.monomial(o21, (0, 1), 1)
        assert pth_power(euler) == euler

    def test_regular_powers(self, o21, regular_w21):
        """Test the p^l-th powers of d_1 + x_1^{p-1} d_2"""
        for l in range(3):
            assert iterated_pth_power(regular_w21, l) == regular_power_formula(o21, l)

    def test_jacobson_formula(self, o21, rng):
        """Test (D + E)^[p] = D^[p] + E^[p] + sum s_i(D, E)"""
        for _ in range(3):
            D, E = random_derivation(o21, rng), random_derivation(o21, rng)
            assert jacobson_sum_check(D, E)

    def test_jacobson_terms_commuting(self, o21):
        """Test that the s_i vanish on commuting elements"""
        d1 = DerivationElement.partial(o21, 0)
        d2 = DerivationElement.partial(o21, 1)
        assert all(term.is_zero() for term in jacobson_si(d1, d2))
        assert len(jacobson_si(d1, d2)) == 4

    def test_adjoint_and_semilinearity(self, o11, rng):
        """Test ad(x^[p]) = (ad x)^p and (cx)^[p] = c^p x^[p]"""
        x = random_derivation(o11, rng, density=0.8)
        assert ad_power_check(x)
        for c in range(1, 5):
            assert semilinearity_check(x, c)

    def test_sl2_elements(self, field5):
        """Test that sl_2 elements go through the same p-map"""
        e = Sl2Element.basis(field5, 0)
        h = Sl2Element.basis(field5, 2)

        assert pth_power(e).is_zero()
        assert pth_power(h) == h
        assert is_nilpotent(e)


class TestNilpotency:
    """Unit tests for nilpotency and regularity"""

    def test_nilpotency_index(self, o11, regular_w21):
        """Test the least N with x^[p]^N = 0"""
        assert nilpotency_index(DerivationElement.partial(o11, 0)) == 1
        assert nilpotency_index(regular_w21) == 2
        assert nilpotency_index(DerivationElement.monomial(o11, (1,), 0)) is None
        assert not is_nilpotent(DerivationElement.monomial(o11, (1,), 0))

    def test_regular(self, regular_w21, partial_w21, o12):
        """Test regularity through the kernel on O(2;1)"""
        assert is_regular_witt(regular_w21)
        assert not is_regular_witt(partial_w21)
        with pytest.raises(ValueError):
            is_regular_witt(DerivationElement.partial(o12, 0))

    def test_rank_sequence(self, regular_w21):
        """Test rank(D^k) = 25 - k for the regular nilpotent derivation"""
        ranks = operator_rank_sequence(regular_w21)
        assert ranks == [25 - k for k in range(26)]

    def test_jordan_profile(self, regular_w21, partial_w21):
        """Test one block for the regular element and five for d_1"""
        assert jordan_block_profile(regular_w21) == {25: 1}
        assert jordan_block_profile(partial_w21) == {5: 5}

    def test_profile_needs_nilpotent(self, o11):
        """Test that a toral element has no block profile"""
        with pytest.raises(NotNilpotentError):
            jordan_block_profile(DerivationElement.monomial(o11, (1,), 0))

    def test_semisimple_rank(self, o11, o21):
        """Test the toral rank seen by single elements"""
        assert semisimple_rank(DerivationElement.monomial(o11, (1,), 0)) == 1
        assert semisimple_rank(DerivationElement.partial(o11, 0)) == 0
        x1_d1 = DerivationElement.monomial(o21, (1, 0), 0)
        assert semisimple_rank(x1_d1 + DerivationElement.monomial(o21, (0, 1), 1).scale(2)) == 1

    def test_jordan_chevalley(self, o11):
        """Test x = x_s + x_n with commuting parts"""
        x = DerivationElement.monomial(o11, (1,), 0) + DerivationElement.monomial(o11, (2,), 0)
        s, n = jordan_chevalley(x)

        assert s + n == x
        assert is_nilpotent(n) or n.is_zero()
        assert witt_bracket(s, n).is_zero()
        assert pth_power(s) == s

    def test_centralizer(self, o11):
        """Test that x d commutes only with its own multiples in W(1;1)"""
        assert centralizer_dimension(DerivationElement.monomial(o11, (1,), 0)) == 1
        assert centralizer_dimension(DerivationElement.zero(o11)) == 5


class TestClosureAndPsi:
    """Unit tests for p-closures and psi-relations"""

    def test_envelope_of_zassenhaus(self, o12):
        """Test dim of the p-closure of W(1;2) = p^2 + 1"""
        closure = p_closure(witt_basis(o12))
        assert closure.dimension() == 26
        assert closure_check(closure)

    def test_closure_of_restricted_algebra(self, o11):
        """Test that W(1;1) is its own p-closure"""
        assert p_closure(witt_basis(o11)).dimension() == 5

    def test_closure_of_single_element(self, o11):
        """Test the p-closure of d"""
        closure = p_closure([DerivationElement.partial(o11, 0)])
        assert closure.dimension() == 1
        assert closure.contains(as_operator(DerivationElement.partial(o11, 0).scale(3)).entries)

    def test_closure_needs_generators(self):
        """Test that an empty generator list raises"""
        with pytest.raises(ValueError):
            p_closure([])

    def test_psi_relation(self, o11):
        """Test psi_0 for nilpotent and toral elements of W(1;1)"""
        nilpotent = psi_relation(DerivationElement.partial(o11, 0))
        toral = psi_relation(DerivationElement.monomial(o11, (1,), 0))

        assert nilpotent.vanishes()
        assert toral.psi == (1,)
        assert not toral.vanishes()
        assert toral.observed_length == 1

    def test_psi_relation_rejects_wrong_length(self, o11):
        """Test that s must match the torus rank"""
        with pytest.raises(PsiRelationError):
            psi_relation(DerivationElement.partial(o11, 0), e=0, s=2)

    def test_psi_vanishing_matches_nilpotency(self, o11, rng):
        """Test that nilpotent elements are the zeros of psi_0"""
        for _ in range(20):
            x = random_derivation(o11, rng, density=0.6)
            assert psi_relation(x).vanishes() == is_nilpotent(x)


class TestRealizations:
    """Unit tests for the realization registry"""

    def test_unregistered(self):
        """Test that unknown element types raise"""
        with pytest.raises(UnregisteredAlgebraError):
            realization_for(object())

    def test_as_operator(self, o21, partial_w21):
        """Test the operator of d_1 on O(2;1)"""
        op = as_operator(partial_w21)
        assert op.dim == 25
        assert not op.is_zero()

    def test_shared_realization(self, o21, partial_w21, regular_w21):
        """Test that elements of one algebra share a realization"""
        assert realization_for(partial_w21) is realization_for(regular_w21)
        assert realization_for(partial_w21).constants() == (0, 2)

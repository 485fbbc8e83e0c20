import numpy as np
import pytest

from src.cartan_algebras import (
    DerivationElement,
    HamiltonianIndex,
    Sl2Element,
    contact_bracket,
    contact_D_K,
    derivation_filtration_degree,
    derivation_from_operator,
    derivation_operator_matrix,
    divergence,
    expected_contact_dimension,
    expected_hamiltonian_dimension,
    expected_special_dimension,
    hamiltonian_D_H,
    hamiltonian_span_dimension,
    homogeneous_degree,
    in_filtration,
    poisson_bracket,
    regular_nilpotent_derivation,
    regular_power_formula,
    sl2_bracket,
    sl2_is_nilpotent,
    sl2_pth,
    sl2_pth_table,
    sl2_structure_constants,
    special_D_ij,
    special_span_dimension,
    witt_basis,
    witt_bracket,
    witt_dimension,
)
from src.divided_power import AlgebraShape, DPElement, ZeroElementError
from src.scalars import ext_field_make
from src.utils.linalg import NotInSpanError


def random_derivation(shape, rng, density=0.3):
    values = rng.integers(0, shape.p, size=shape.m * shape.dim)
    values[rng.random(values.size) > density] = 0
    return DerivationElement.from_dense(shape, values)


def random_poly(shape, rng, density=0.3):
    values = rng.integers(0, shape.p, size=shape.dim)
    values[rng.random(shape.dim) > density] = 0
    return DPElement.from_dense(shape, values)


class TestWittAlgebra:
    """Unit tests for W(m;n) arithmetic"""

    def test_dimension(self, o21, o12):
        """Test dim W(m;n) = m p^{|n|}"""
        assert witt_dimension(o21) == 50
        assert len(witt_basis(o21)) == 50
        assert witt_dimension(o12) == 25

    def test_basic_bracket(self, o21, partial_w21):
        """Test [d_1, x_1 d_1] = d_1 and [d_1, x_2 d_1] = 0"""
        x1_d1 = DerivationElement.monomial(o21, (1, 0), 0)
        x2_d1 = DerivationElement.monomial(o21, (0, 1), 0)

        assert witt_bracket(partial_w21, x1_d1) == partial_w21
        assert witt_bracket(partial_w21, x2_d1).is_zero()

    def test_lie_algebra_axioms(self, o21, rng):
        """Test antisymmetry and the Jacobi identity"""
        D, E, F = (random_derivation(o21, rng) for _ in range(3))

        assert witt_bracket(D, D).is_zero()
        assert witt_bracket(D, E) == -witt_bracket(E, D)
        jacobi = (
            witt_bracket(D, witt_bracket(E, F))
            + witt_bracket(E, witt_bracket(F, D))
            + witt_bracket(F, witt_bracket(D, E))
        )
        assert jacobi.is_zero()

    def test_derivation_rule(self, o21, rng):
        """Test D(fg) = D(f) g + f D(g)"""
        D = random_derivation(o21, rng)
        f, g = random_poly(o21, rng), random_poly(o21, rng)

        assert D(f * g) == D(f) * g + f * D(g)

    def test_bracket_is_commutator(self, o21, rng):
        """Test that the bracket acts as the operator commutator"""
        D, E = random_derivation(o21, rng), random_derivation(o21, rng)
        f = random_poly(o21, rng, density=0.6)

        assert witt_bracket(D, E)(f) == D(E(f)) - E(D(f))

    def test_operator_round_trip(self, o21, rng):
        """Test recovering a derivation from its operator matrix"""
        D = random_derivation(o21, rng)
        assert derivation_from_operator(o21, derivation_operator_matrix(D)) == D

    def test_operator_not_a_derivation(self, o21):
        """Test that a non-derivation operator is refused"""
        with pytest.raises(NotInSpanError):
            derivation_from_operator(o21, np.eye(o21.dim, dtype=np.int64))

    def test_degrees(self, o21, partial_w21):
        """Test filtration and grading degrees"""
        x1_d1 = DerivationElement.monomial(o21, (1, 0), 0)
        mixed = partial_w21 + DerivationElement.monomial(o21, (1, 1), 1)

        assert derivation_filtration_degree(partial_w21) == -1
        assert derivation_filtration_degree(x1_d1) == 0
        assert homogeneous_degree(x1_d1) == 0
        assert homogeneous_degree(mixed) is None
        assert in_filtration(x1_d1, 0)
        assert not in_filtration(partial_w21, 0)
        assert in_filtration(DerivationElement.zero(o21), 3)
        with pytest.raises(ZeroElementError):
            derivation_filtration_degree(DerivationElement.zero(o21))

    def test_divergence(self, o21):
        """Test div(x_1 d_1 + x_1 d_2) = 1"""
        D = DerivationElement.monomial(o21, (1, 0), 0) + DerivationElement.monomial(o21, (1, 0), 1)
        assert divergence(D) == DPElement.one(o21)

    def test_serialize_parse(self, o21, rng):
        """Test the text form of a derivation"""
        D = random_derivation(o21, rng)
        assert DerivationElement.parse(D.serialize()) == D
        with pytest.raises(ValueError):
            DerivationElement.parse("")


class TestRegularNilpotent:
    """Unit tests for the regular nilpotent derivation"""

    def test_shape(self, o21, regular_w21):
        """Test d_1 + x_1^{p-1} d_2 with an ordinary power"""
        assert regular_w21[0] == DPElement.one(o21)
        # x_1^4 = 4! x_1^(4) = -x_1^(4)
        assert regular_w21[1] == DPElement.monomial(o21, (4, 0), 4)

    def test_divided_variant(self, o21):
        """Test the divided power version"""
        divided = regular_nilpotent_derivation(o21, divided=True)
        assert divided[1] == DPElement.monomial(o21, (4, 0))

    def test_power_formula(self, o21, regular_w21):
        """Test the closed forms of the p^l-th powers"""
        assert regular_power_formula(o21, 0) == regular_w21
        assert regular_power_formula(o21, 1) == DerivationElement.partial(o21, 1).scale(-1)
        assert regular_power_formula(o21, 2).is_zero()


class TestSpecialHamiltonianContact:
    """Unit tests for the S, H and K constructions"""

    def test_special_D_ij(self, o21, x1_o21):
        """Test D_12(x_1) = -d_2 and D_ii = 0"""
        assert special_D_ij(1, 2, x1_o21) == DerivationElement.partial(o21, 1).scale(-1)
        assert special_D_ij(1, 1, x1_o21).is_zero()
        with pytest.raises(IndexError):
            special_D_ij(1, 3, x1_o21)

    def test_special_is_divergence_free(self, o31, rng):
        """Test that D_ij(f) has zero divergence"""
        f = random_poly(o31, rng, density=0.2)
        for i, j in ((1, 2), (1, 3), (2, 3)):
            assert divergence(special_D_ij(i, j, f)).is_zero()

    def test_special_dimension(self, field3):
        """Test the span of D_ij(x^(a)) in O(3;1) over F_3"""
        shape = AlgebraShape.truncated(field3, 3)
        assert expected_special_dimension(shape) == 52
        assert special_span_dimension(shape) == 52

    def test_hamiltonian_dimension(self, o21_p3, o21):
        """Test the span of D_H(x^(a)), 0 < a < top"""
        assert expected_hamiltonian_dimension(o21_p3) == 7
        assert hamiltonian_span_dimension(o21_p3) == 7
        assert expected_hamiltonian_dimension(o21) == 23

    def test_hamiltonian_index(self):
        """Test signs and partners"""
        assert HamiltonianIndex(2, 1).sigma == 1
        assert HamiltonianIndex(2, 1).partner == 3
        assert HamiltonianIndex(2, 4).sigma == -1
        assert HamiltonianIndex(2, 4).partner == 2
        with pytest.raises(ValueError):
            HamiltonianIndex(2, 5)

    def test_poisson_homomorphism(self, o21, rng):
        """Test [D_H(f), D_H(g)] = D_H({f, g})"""
        f, g = random_poly(o21, rng), random_poly(o21, rng)
        assert witt_bracket(hamiltonian_D_H(f), hamiltonian_D_H(g)) == hamiltonian_D_H(poisson_bracket(f, g))

    def test_hamiltonian_needs_even_rank(self, o31, o11):
        """Test variable count validation"""
        with pytest.raises(ValueError):
            hamiltonian_D_H(DPElement.one(o31))
        with pytest.raises(ValueError):
            contact_D_K(DPElement.one(o11))

    def test_contact_generators(self, o31):
        """Test D_K on constants and on x_3"""
        x1 = DPElement.variable(o31, 0)
        x2 = DPElement.variable(o31, 1)
        x3 = DPElement.variable(o31, 2)

        assert contact_D_K(DPElement.one(o31)) == DerivationElement.partial(o31, 2).scale(2)
        euler = DerivationElement(o31, [x1, x2, x3.scale(2)])
        assert contact_D_K(x3) == euler

    def test_contact_homomorphism(self, o31):
        """Test [D_K(f), D_K(g)] = D_K(<f, g>) on generators"""
        x1 = DPElement.variable(o31, 0)
        x2 = DPElement.variable(o31, 1)
        x3 = DPElement.variable(o31, 2)
        for f, g in ((x1, x2), (x3, x1), (x3, x2)):
            assert witt_bracket(contact_D_K(f), contact_D_K(g)) == contact_D_K(contact_bracket(f, g))
        assert contact_bracket(x1, x2) == DPElement.one(o31)

    def test_expected_contact_dimension(self, field3, o31):
        """Test the exceptional case 2r + 4 = 0 mod p"""
        assert expected_contact_dimension(o31) == 125
        assert expected_contact_dimension(AlgebraShape.truncated(field3, 3)) == 26


class TestSl2:
    """Unit tests for the restricted algebra sl_2"""

    def setup_method(self):
        """Setup the basis of sl_2 over F_5"""
        self.field = ext_field_make(5)
        self.e, self.f, self.h = (Sl2Element.basis(self.field, i) for i in range(3))

    def test_brackets(self):
        """Test [e, f] = h, [h, e] = 2e, [h, f] = -2f"""
        assert sl2_bracket(self.e, self.f) == self.h
        assert sl2_bracket(self.h, self.e) == self.e.scale(2)
        assert sl2_bracket(self.h, self.f) == self.f.scale(-2)

    def test_pth_powers(self):
        """Test e^[p] = f^[p] = 0 and h^[p] = h"""
        assert sl2_pth(self.e).is_zero()
        assert sl2_pth(self.h) == self.h
        assert sl2_is_nilpotent(self.f)
        assert not sl2_is_nilpotent(self.h)
        assert np.array_equal(sl2_pth_table(self.field), np.array([[0, 0, 0], [0, 0, 0], [0, 0, 1]]))

    def test_structure_constants(self):
        """Test the antisymmetric structure tensor"""
        constants = sl2_structure_constants(self.field)
        assert constants.shape == (3, 3, 3)
        assert list(constants[0, 1]) == [0, 0, 1]
        assert np.array_equal((constants + constants.transpose(1, 0, 2)) % 5, np.zeros((3, 3, 3)))

    def test_matrix_round_trip(self):
        """Test the 2x2 realization"""
        x = Sl2Element(self.field, (1, 2, 3))
        assert Sl2Element.from_matrix(self.field, x.matrix()) == x
        with pytest.raises(ValueError):
            Sl2Element.from_matrix(self.field, np.eye(2, dtype=np.int64))

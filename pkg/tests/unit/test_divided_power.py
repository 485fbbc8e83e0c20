import math

import numpy as np
import pytest

from src.divided_power import (
    AlgebraShape,
    DPElement,
    NotAUnitError,
    ShapeMismatchError,
    ZeroElementError,
    deglex_compare,
    deglex_min,
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
    p_degree,
)
from src.scalars import ext_field_make


def random_poly(shape, rng, constant=None, density=1.0):
    values = rng.integers(0, shape.p, size=shape.dim)
    values[rng.random(shape.dim) > density] = 0
    if constant is not None:
        values[0] = constant
    return DPElement.from_dense(shape, values)


class TestAlgebraShape:
    """Unit tests for the shape of O(m;n)"""

    def test_dimensions(self, o21, o12):
        """Test bounds, dimension and top exponent"""
        assert o21.dim == 25
        assert o21.bounds == (5, 5)
        assert o21.top == (4, 4)
        assert o12.dim == 25
        assert o12.bounds == (25,)
        assert o21.is_truncated()
        assert not o12.is_truncated()

    def test_validation(self, field5):
        """Test that inconsistent heights and splits raise"""
        with pytest.raises(ValueError):
            AlgebraShape(2, (1,), field5)
        with pytest.raises(ValueError):
            AlgebraShape(1, (0,), field5)
        with pytest.raises(ValueError):
            AlgebraShape.truncated(field5, 2, split=3)

    def test_rank_order(self, o21):
        """Test that the first variable varies fastest"""
        basis = monomials(o21)

        assert basis[0] == (0, 0)
        assert basis[1] == (1, 0)
        assert basis[5] == (0, 1)
        for r, a in enumerate(basis):
            assert o21.rank(a) == r
            assert o21.unrank(r) == a

    def test_serialize_parse(self, field5):
        """Test the text form of a shape"""
        shape = AlgebraShape(2, (1, 2), field5, split=1)
        assert AlgebraShape.parse(shape.serialize()) == shape
        assert repr(AlgebraShape.truncated(field5, 2)) == "O(2;(1,1))/F5"

    def test_accepts_plain_prime(self):
        """Test that an integer field argument builds F_p"""
        assert AlgebraShape.truncated(7, 1).field == ext_field_make(7)


class TestDPElementArithmetic:
    """Unit tests for products and inverses in O(m;n)"""

    def test_divided_power_rule(self, o11, o12):
        """Test x^(r) x^(s) = C(r+s, r) x^(r+s)"""
        x = DPElement.variable(o11, 0)
        assert x * x == DPElement.monomial(o11, (2,), 2)
        assert DPElement.monomial(o11, (2,)) * DPElement.monomial(o11, (3,)) == DPElement.zero(o11)

        # C(5, 2) = 10 vanishes mod 5 even inside the bounds
        assert DPElement.monomial(o12, (2,)) * DPElement.monomial(o12, (3,)) == DPElement.zero(o12)
        assert DPElement.monomial(o12, (5,)) * DPElement.monomial(o12, (1,)) == DPElement.monomial(o12, (6,))

    def test_terms_outside_bounds_rejected(self, o11):
        """Test term validation"""
        with pytest.raises(ValueError):
            DPElement.monomial(o11, (5,))

    def test_dense_product_matches_termwise(self, o21, rng):
        """Test the table product against a sum of monomial products"""
        f = random_poly(o21, rng)
        g = random_poly(o21, rng)
        expected = DPElement.zero(o21)
        for a, c in f.items():
            for b, d in g.items():
                expected = expected + dp_mul(DPElement.monomial(o21, a, c), DPElement.monomial(o21, b, d))

        assert len(f) * len(g) > 64
        assert dp_mul(f, g) == expected

    def test_ring_axioms(self, o21, rng):
        """Test commutativity, associativity and distributivity"""
        f, g, h = (random_poly(o21, rng, density=0.4) for _ in range(3))

        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == DPElement.zero(o21)

    def test_multiplication_matrix(self, o21, rng):
        """Test that the multiplication operator reproduces the product"""
        f = random_poly(o21, rng, density=0.3)
        g = random_poly(o21, rng)
        product = multiplication_matrix(f) @ g.dense() % 5

        assert np.array_equal(product, (f * g).dense())

    def test_shape_mismatch(self, o11, o21):
        """Test that operands of different shapes do not combine"""
        with pytest.raises(ShapeMismatchError):
            DPElement.one(o11) + DPElement.one(o21)
        with pytest.raises(ShapeMismatchError):
            dp_mul(DPElement.one(o11), DPElement.one(o21))

    def test_inverse(self, o21, rng):
        """Test inverses of units"""
        f = random_poly(o21, rng, constant=3)
        assert f * dp_inverse(f) == DPElement.one(o21)

    def test_non_unit(self, o21, x1_o21):
        """Test that elements of the maximal ideal are not invertible"""
        with pytest.raises(NotAUnitError):
            dp_inverse(x1_o21)

    def test_ordinary_monomial(self, o11):
        """Test x^{p-1} = (p-1)! x^(p-1) = -x^(p-1)"""
        assert ordinary_monomial(o11, (4,)) == DPElement.monomial(o11, (4,), 4)
        x = DPElement.variable(o11, 0)
        assert dp_power(x, 4) == ordinary_monomial(o11, (4,))
        assert dp_power(x, 5) == DPElement.zero(o11)

    def test_serialize_parse(self, o21, rng):
        """Test the text form of an element"""
        f = random_poly(o21, rng, density=0.3)
        assert DPElement.parse(f.serialize()) == f
        assert DPElement.parse("1:2,5:1", o21) == DPElement(o21, {(1, 0): 2, (0, 1): 1})
        with pytest.raises(ValueError):
            DPElement.parse("1:2")


class TestDividedPowers:
    """Unit tests for f^(r) on O(1;n)"""

    def test_variable(self, o12):
        """Test x^(r) as a divided power of x"""
        x = DPElement.variable(o12, 0)
        for r in range(12):
            assert dp_divided_power(x, r) == DPElement.monomial(o12, (r,))

    def test_factorial_relation(self, o12, rng):
        """Test r! f^(r) = f^r"""
        f = random_poly(o12, rng, constant=0, density=0.5)
        for r in range(1, 5):
            assert dp_divided_power(f, r).scale(math.factorial(r)) == dp_power(f, r)

    def test_requires_maximal_ideal(self, o12):
        """Test that a unit has no divided powers"""
        with pytest.raises(ValueError):
            dp_divided_power(DPElement.one(o12), 2)

    def test_one_variable_only(self, o21, x1_o21):
        """Test that several variables are refused"""
        with pytest.raises(ValueError):
            dp_divided_power(x1_o21, 2)


class TestDerivationsAndDegrees:
    """Unit tests for d_i, filtration degrees and embeddings"""

    def test_partial(self, o21):
        """Test d_i x^(a) = x^(a - e_i)"""
        f = DPElement(o21, {(2, 3): 1, (0, 4): 2})
        assert dp_partial(f, 0) == DPElement.monomial(o21, (1, 3))
        assert dp_partial(f, 1) == DPElement(o21, {(2, 2): 1, (0, 3): 2})

    def test_leibniz(self, o21, rng):
        """Test that d_i is a derivation"""
        f = random_poly(o21, rng, density=0.4)
        g = random_poly(o21, rng, density=0.4)
        for i in range(2):
            assert dp_partial(f * g, i) == dp_partial(f, i) * g + f * dp_partial(g, i)

    def test_filtration_degree(self, o21):
        """Test the lowest standard degree"""
        assert dp_filtration_degree(DPElement(o21, {(1, 1): 1, (3, 0): 2})) == 2
        assert dp_infinite_degree(DPElement.zero(o21)) == math.inf
        with pytest.raises(ZeroElementError):
            dp_filtration_degree(DPElement.zero(o21))

    def test_embed_restrict(self, o11, o21):
        """Test moving elements between O(1;1) and O(2;1)"""
        f = DPElement(o11, {(2,): 3, (0,): 1})
        embedded = dp_embed(f, o21, offset=1)

        assert embedded == DPElement(o21, {(0, 2): 3, (0, 0): 1})
        assert dp_restrict(embedded, o11, offset=1) == f
        with pytest.raises(ValueError):
            dp_restrict(embedded, o11, offset=0)

    def test_involves(self, o21, x1_o21):
        """Test variable occurrence"""
        assert x1_o21.involves(0)
        assert not x1_o21.involves(1)


class TestDegLex:
    """Unit tests for the DegLex ordering"""

    def test_p_degree(self):
        """Test the weighted degree"""
        assert p_degree((1, 2), 1, 5) == 11
        assert p_degree((1, 2), 2, 5) == 11
        assert p_degree((1, 2, 1), 2, 5) == 11 + 25

    def test_compare(self):
        """Test degree first, then reversed lexicographic"""
        assert deglex_compare((2, 0), (0, 1), 1, 5) == -1
        assert deglex_compare((0, 1, 0), (0, 0, 1), 1, 5) == -1
        assert deglex_compare((0, 0, 1), (0, 1, 0), 1, 5) == 1
        assert deglex_compare((3, 1), (3, 1), 2, 5) == 0

    def test_compare_validation(self):
        """Test that bad arguments raise"""
        with pytest.raises(ValueError):
            deglex_compare((1,), (1, 0), 1, 5)
        with pytest.raises(ValueError):
            deglex_compare((1, 0), (0, 1), 3, 5)

    def test_min(self):
        """Test the DegLex-least index"""
        assert deglex_min([(0, 1), (4, 0), (2, 0)], 1, 5) == (2, 0)
        assert deglex_min([], 1, 5) is None

import pytest

from src.cartan_algebras import DerivationElement
from src.cli.families import (
    CONSTRAINTS,
    EnvelopeFamily,
    SemidirectFamily,
    WittFamily,
    build_algebra,
    constraint_support,
    family_from_config,
)
from src.divided_power import DPElement
from src.restricted import is_nilpotent
from src.semidirect import SemidirectElement
from src.zassenhaus import PEnvelopeElement


def unit_coords(size, index, value=1):
    coords = [0] * size
    coords[index] = value
    return coords


class TestWittFamily:
    """Unit tests for the witt family handle"""

    def setup_method(self):
        """Setup W(1;1) over F_5"""
        self.family = build_algebra("witt", 5, 1, (1,))

    def test_summary(self):
        """Test dimension 5 and grading -1..3"""
        summary = self.family.summary()

        assert isinstance(self.family, WittFamily)
        assert summary["algebra"] == "W(1;(1))"
        assert summary["dimension"] == 5
        assert summary["dimension_matches"]
        assert (summary["grading_min"], summary["grading_max"]) == (-1, 3)

    def test_coordinates(self):
        """Test that coordinate 0 is d and coordinate 1 is x d"""
        shape = self.family.shape
        assert self.family.size == 5
        assert self.family.element(unit_coords(5, 0)) == DerivationElement.partial(shape, 0)
        assert self.family.element(unit_coords(5, 1, 7)) == DerivationElement.monomial(shape, (1,), 0, 2)

    def test_round_trip(self, rng):
        """Test parse(serialize(x)) = x"""
        x = self.family.uniform(rng)
        assert self.family.parse(self.family.serialize(x)) == x

    def test_criterion(self):
        """Test psi_0 on d and x d"""
        assert self.family.criterion(self.family.element(unit_coords(5, 0)))
        assert not self.family.criterion(self.family.element(unit_coords(5, 1)))

    def test_nilpotent_proposals(self, rng):
        """Test that proposals meet the nilpotent constraint often enough"""
        accepted = [x for x in (self.family.propose(rng, "nilpotent") for _ in range(20))
                    if self.family.satisfies(x, "nilpotent")]
        assert accepted
        assert all(is_nilpotent(x) for x in accepted)

    def test_unsupported_constraint(self):
        """Test that witt has no regular/singular split"""
        x = self.family.element(unit_coords(5, 0))
        assert self.family.satisfies(x, "any")
        with pytest.raises(ValueError):
            self.family.satisfies(x, "regular-nilpotent")
        assert constraint_support(self.family) == ["any", "nilpotent"]

    def test_parse_rejects_other_shapes(self, o21, partial_w21):
        """Test that a W(2;1) element is refused"""
        with pytest.raises(ValueError):
            self.family.parse(partial_w21.serialize())


class TestEnvelopeFamily:
    """Unit tests for the zassenhaus-envelope family handle"""

    def setup_method(self):
        """Setup W(1;2)_p over F_5"""
        self.family = build_algebra("zassenhaus-envelope", 5, 1, (2,))

    def test_summary(self):
        """Test dimension p^2 + 1 and grading -p..p^2-2"""
        summary = self.family.summary()

        assert isinstance(self.family, EnvelopeFamily)
        assert summary["dimension"] == 26
        assert summary["expected_dimension"] == 26
        assert summary["dimension_matches"]
        assert (summary["grading_min"], summary["grading_max"]) == (-5, 23)

    def test_coordinates(self):
        """Test that the last coordinate is the d^p tail"""
        shape = self.family.shape
        assert self.family.size == 26
        assert self.family.element(unit_coords(26, 25)) == PEnvelopeElement.partial_power(shape, 1)
        assert self.family.element(unit_coords(26, 0)) == PEnvelopeElement.partial_power(shape, 0)

    def test_criterion(self):
        """Test psi-vanishing on d and x d"""
        shape = self.family.shape
        assert self.family.criterion(PEnvelopeElement.partial_power(shape, 0))
        assert not self.family.criterion(PEnvelopeElement.monomial(shape, 1))

    def test_regular_and_singular(self):
        """Test the regular/singular constraints"""
        shape = self.family.shape
        d = PEnvelopeElement.partial_power(shape, 0)
        x2_d = PEnvelopeElement.monomial(shape, 2)

        assert self.family.satisfies(d, "regular-nilpotent")
        assert not self.family.satisfies(d, "singular-nilpotent")
        assert self.family.satisfies(x2_d, "singular-nilpotent")
        assert not self.family.satisfies(PEnvelopeElement.monomial(shape, 1), "regular-nilpotent")
        assert constraint_support(self.family) == list(CONSTRAINTS)

    def test_round_trip(self, rng):
        """Test parse(serialize(x)) = x"""
        x = self.family.uniform(rng)
        assert self.family.parse(self.family.serialize(x)) == x


class TestSemidirectFamily:
    """Unit tests for the sl2-semidirect family handle"""

    def setup_method(self):
        """Setup sl_2 x O(1;1) x| k d over F_5"""
        self.family = build_algebra("sl2-semidirect", 5)

    def test_summary(self):
        """Test dimension 3p + 1"""
        summary = self.family.summary()

        assert isinstance(self.family, SemidirectFamily)
        assert self.family.size == 16
        assert summary["dimension"] == 16
        assert summary["dimension_matches"]
        assert (summary["grading_min"], summary["grading_max"]) == (-1, 4)

    def test_coordinates_and_criterion(self):
        """Test e x 1 (nilpotent) and h x 1 (toral)"""
        one = DPElement.one(self.family.shape)
        e = self.family.element(unit_coords(16, 0))
        h = self.family.element(unit_coords(16, 10))

        assert e == SemidirectElement.pure(self.family.ambient, (1, 0, 0), one)
        assert h == SemidirectElement.pure(self.family.ambient, (0, 0, 1), one)
        assert self.family.criterion(e)
        assert not self.family.criterion(h)
        assert self.family.satisfies(e, "nilpotent")

    def test_tail_coordinate(self):
        """Test that the last coordinate is the d tail"""
        x = self.family.element(unit_coords(16, 15, 2))
        assert x.tail == DerivationElement.partial(self.family.shape, 0).scale(2)

    def test_round_trip(self, rng):
        """Test parse(serialize(x)) = x"""
        x = self.family.uniform(rng)
        assert self.family.parse(self.family.serialize(x)) == x


class TestBuildAlgebra:
    """Unit tests for the cached family registry"""

    def test_cached(self, witt_config):
        """Test that a config and its key give the same handle"""
        family = family_from_config(witt_config)
        assert family is build_algebra("witt", 5, 1, (1,))
        assert family.key == ("witt", 5, 1, (1,))

    def test_envelope_from_config(self, envelope_config, semidirect_config):
        """Test the heights passed for each family"""
        assert family_from_config(envelope_config).n == 2
        assert family_from_config(semidirect_config).name == "sl2-semidirect"

    def test_unknown_family(self):
        """Test that an unknown family raises"""
        with pytest.raises(ValueError):
            build_algebra("lie", 5)

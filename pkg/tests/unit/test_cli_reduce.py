import pytest

from src.automorphisms import PreconditionError
from src.cli.families import build_algebra
from src.cli.reduce import REDUCTION_FAMILIES, replay_chain, run_reduction
from src.utils.rng import substream
from src.zassenhaus import PEnvelopeElement


@pytest.fixture
def w21():
    return build_algebra("witt", 5, 1, (1, 1))


@pytest.fixture
def envelope():
    return build_algebra("zassenhaus-envelope", 5, 1, (2,))


@pytest.fixture
def semidirect():
    return build_algebra("sl2-semidirect", 5)


class TestRunReduction:
    """Unit tests for reductions on random inputs"""

    @pytest.mark.parametrize("which, fixture", [
        ("demushkin", "w21"),
        ("premet", "w21"),
        ("yao-shu", "envelope"),
        ("tyurin", "envelope"),
        ("semidirect", "semidirect"),
    ])
    def test_replay(self, request, which, fixture):
        """Test that the emitted chain reproduces the emitted form"""
        family = request.getfixturevalue(fixture)
        outcome = run_reduction(family, which, rng=substream(21, 0))

        assert outcome["which"] == which
        assert outcome["replay"]
        assert outcome["moves"] == len(outcome["chain"])
        assert outcome["algebra"] == family.label()

    def test_deterministic(self, envelope):
        """Test that a fixed stream gives a fixed report"""
        first = run_reduction(envelope, "yao-shu", rng=substream(4, 0))
        second = run_reduction(envelope, "yao-shu", rng=substream(4, 0))
        assert first == second

    def test_tyurin_details(self, envelope):
        """Test the reported t and h"""
        outcome = run_reduction(envelope, "tyurin", rng=substream(8, 0), t=1)
        assert outcome["details"]["t"] == 1
        assert len(outcome["details"]["betas"]) == 1


class TestSuppliedElements:
    """Unit tests for reductions on given elements"""

    def test_partial_needs_no_moves(self, envelope):
        """Test that d is already in Yao-Shu form"""
        d = PEnvelopeElement.partial_power(envelope.shape, 0)
        outcome = run_reduction(envelope, "yao-shu", d.serialize())

        assert outcome["moves"] == 0
        assert outcome["form"] == d.serialize()
        assert outcome["details"]["reaches_partial"]

    def test_library_errors_propagate(self, envelope):
        """Test that x d has no Yao-Shu reduction"""
        x_d = PEnvelopeElement.monomial(envelope.shape, 1)
        with pytest.raises(PreconditionError):
            run_reduction(envelope, "yao-shu", x_d.serialize())

    def test_replay_detects_wrong_form(self, envelope):
        """Test that replay compares against the reported form"""
        d = PEnvelopeElement.partial_power(envelope.shape, 0)
        assert replay_chain(envelope, "", d, d)
        assert not replay_chain(envelope, "", d, d.scale(2))


class TestApplicability:
    """Unit tests for family and parameter checks"""

    def test_families(self):
        """Test the reduction-to-family table"""
        assert REDUCTION_FAMILIES["yao-shu"] == "zassenhaus-envelope"
        assert REDUCTION_FAMILIES["semidirect"] == "sl2-semidirect"

    def test_wrong_family(self, w21, envelope):
        """Test reductions run on the wrong family"""
        with pytest.raises(ValueError):
            run_reduction(w21, "yao-shu")
        with pytest.raises(ValueError):
            run_reduction(envelope, "demushkin")
        with pytest.raises(ValueError):
            run_reduction(envelope, "jordan")

    def test_truncated_only(self):
        """Test that demushkin needs O(m;1)"""
        with pytest.raises(ValueError):
            run_reduction(build_algebra("witt", 5, 1, (2,)), "demushkin")

    def test_tyurin_order(self, envelope):
        """Test t outside 1..n-1"""
        with pytest.raises(ValueError):
            run_reduction(envelope, "tyurin", t=2)

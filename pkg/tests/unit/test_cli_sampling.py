import pytest

from src.cli.families import build_algebra
from src.cli.sampling import Sample, SamplingBudgetError, sample_elements
from src.restricted import is_nilpotent
from src.zassenhaus import classify_nilpotent

W11 = ("witt", 5, 1, (1,))
W12P = ("zassenhaus-envelope", 5, 1, (2,))


class TestSampleElements:
    """Unit tests for rejection sampling"""

    def test_nilpotent_witt(self):
        """Test that accepted W(1;1) samples are nilpotent"""
        family = build_algebra(*W11)
        samples = sample_elements(W11, "nilpotent", count=5, seed=2)

        assert len(samples) == 5
        assert all(isinstance(s, Sample) for s in samples)
        assert [s.index for s in samples] == list(range(5))
        assert all(is_nilpotent(family.parse(s.element)) for s in samples)

    def test_regular_envelope(self):
        """Test that regular samples classify as Regular"""
        family = build_algebra(*W12P)
        samples = sample_elements(W12P, "regular-nilpotent", count=3, seed=5)

        assert all(classify_nilpotent(family.parse(s.element)).regular for s in samples)

    def test_singular_envelope(self):
        """Test that singular samples classify as Singular"""
        family = build_algebra(*W12P)
        samples = sample_elements(W12P, "singular-nilpotent", count=3, seed=5)

        assert all(not classify_nilpotent(family.parse(s.element)).regular for s in samples)

    def test_deterministic(self):
        """Test that samples depend on the seed only"""
        first = sample_elements(W11, "any", count=4, seed=9)
        second = sample_elements(W11, "any", count=4, seed=9)
        other = sample_elements(W11, "any", count=4, seed=10)

        assert first == second
        assert [s.element for s in first] != [s.element for s in other]

    def test_unsupported_constraint(self):
        """Test that witt has no regular-nilpotent sampler"""
        with pytest.raises(ValueError):
            sample_elements(W11, "regular-nilpotent", count=1)

    def test_budget(self, mocker):
        """Test that exhausting the retry budget raises"""
        family = build_algebra(*W11)
        mocker.patch.object(family, "satisfies", return_value=False)
        with pytest.raises(SamplingBudgetError):
            sample_elements(W11, "nilpotent", count=1, budget=3)

import pytest

from src.automorphisms import AdmissibleAutomorphism, PreconditionError, ReductionError, apply_admissible
from src.cartan_algebras import DerivationElement, regular_nilpotent_derivation
from src.divided_power import AlgebraShape, DPElement
from src.restricted import NotNilpotentError, is_nilpotent
from src.utils.linalg import NotInSpanError
from src.zassenhaus import (
    REGULAR,
    SINGULAR,
    PEnvelopeElement,
    as_envelope_element,
    centralizer_check,
    classify_nilpotent,
    conjugate_of_partial,
    e0_torus,
    in_e_l0,
    in_l0,
    iota_check,
    iota_embedding,
    iota_shape,
    lp_bracket,
    lp_in_filtration,
    lp_pth,
    lp_realization,
    random_envelope_element,
    regular_witness_check,
    sigma_grading_check,
    singular_branch,
    tyurin_reduce,
    yao_shu_form,
    yao_shu_reduce,
    zass_e_algebra,
)


class TestEnvelope:
    """Unit tests for W(1;n)_p = W(1;n) + k d^p + ... + k d^{p^{n-1}}"""

    def test_partial_powers(self, o12):
        """Test d^[p] = d^p and (d^p)^[p] = 0 in W(1;2)_p"""
        d = PEnvelopeElement.partial_power(o12, 0)
        d_p = PEnvelopeElement.partial_power(o12, 1)

        assert lp_pth(d) == d_p
        assert lp_pth(d_p).is_zero()
        assert d_p.tails == (1,)
        assert not d_p.in_witt()
        with pytest.raises(ValueError):
            PEnvelopeElement.partial_power(o12, 2)

    def test_bracket_lowers(self, o12):
        """Test [d^p, x^(6) d] = x^(1) d and that the d^{p^i} commute"""
        d_p = PEnvelopeElement.partial_power(o12, 1)
        x6_d = PEnvelopeElement.monomial(o12, 6)

        assert lp_bracket(d_p, x6_d) == PEnvelopeElement.monomial(o12, 1)
        assert lp_bracket(x6_d, d_p) == PEnvelopeElement.monomial(o12, 1).scale(-1)
        assert lp_bracket(d_p, PEnvelopeElement.partial_power(o12, 0)).is_zero()

    def test_action(self, o12):
        """Test that d^p lowers divided powers by p"""
        d_p = PEnvelopeElement.partial_power(o12, 1)
        assert d_p(DPElement.monomial(o12, (7,))) == DPElement.monomial(o12, (2,))
        assert d_p(DPElement.monomial(o12, (3,))).is_zero()

    def test_filtration(self, o12):
        """Test membership in L_(0) and L_(1)"""
        assert in_l0(PEnvelopeElement.monomial(o12, 1))
        assert not in_l0(PEnvelopeElement.partial_power(o12, 0))
        assert not in_l0(PEnvelopeElement.partial_power(o12, 1))
        assert in_l0(PEnvelopeElement.zero(o12))
        assert lp_in_filtration(PEnvelopeElement.monomial(o12, 2), 1)
        assert not lp_in_filtration(PEnvelopeElement.monomial(o12, 1), 1)
        assert lp_in_filtration(PEnvelopeElement.partial_power(o12, 0), -1)

    def test_validation(self, o12, o21):
        """Test tail length and variable count"""
        with pytest.raises(ValueError):
            PEnvelopeElement(o12, tails=(1, 2))
        with pytest.raises(ValueError):
            PEnvelopeElement(o21)
        with pytest.raises(TypeError):
            as_envelope_element(3)

    def test_realization(self, o12, rng):
        """Test the operator round trip and the basis of size p^n + n - 1"""
        realization = lp_realization(o12)
        A = random_envelope_element(o12, rng)

        assert len(realization.basis()) == 26
        assert realization.decompose(realization.operator(A)) == A
        with pytest.raises(NotInSpanError):
            realization.decompose(realization.field.Identity(25))

    def test_serialize_parse(self, o12, rng):
        """Test the text form of an element"""
        A = random_envelope_element(o12, rng)
        assert PEnvelopeElement.parse(A.serialize(), o12) == A
        with pytest.raises(ValueError):
            PEnvelopeElement.parse("poly{}", o12)

    def test_admissible_conjugation_preserves_bracket(self, o12, rng):
        """Test Phi([A, B]) = [Phi(A), Phi(B)] on W(1;2)_p"""
        phi = AdmissibleAutomorphism(o12, (2, 1, 3))
        A, B = random_envelope_element(o12, rng), random_envelope_element(o12, rng)

        lhs = apply_admissible(lp_bracket(A, B), phi)
        assert lhs == lp_bracket(apply_admissible(A, phi), apply_admissible(B, phi))
        assert phi(lp_pth(A)) == lp_pth(phi(A))


class TestYaoShu:
    """Unit tests for the normal form d + sum l_i x^(p^i - 1) d"""

    def test_partial_is_already_normal(self, o12):
        """Test that d needs no moves"""
        result = yao_shu_reduce(PEnvelopeElement.partial_power(o12, 0))

        assert len(result.chain) == 0
        assert result.ls == (0, 0)
        assert result.reaches_partial

    def test_reduction(self, o12):
        """Test clearing every non-restricted monomial"""
        poly = DPElement(o12, {(0,): 2, (1,): 1, (3,): 4, (7,): 2, (12,): 1})
        D = PEnvelopeElement(o12, poly)
        result = yao_shu_reduce(D)

        assert result.form == yao_shu_form(o12, result.ls)
        assert result.chain.apply(D) == result.form
        assert len(result.chain) >= 1

    def test_accepts_derivations(self, o12):
        """Test that W(1;n) derivations are lifted"""
        D = DerivationElement.partial(o12, 0, DPElement.one(o12).scale(3))
        result = yao_shu_reduce(D)
        assert result.reaches_partial

    def test_preconditions(self, o12):
        """Test alpha_0 = 0 and elements with d^{p^i} tails"""
        with pytest.raises(PreconditionError):
            yao_shu_reduce(PEnvelopeElement.monomial(o12, 1))
        with pytest.raises(PreconditionError):
            yao_shu_reduce(PEnvelopeElement.partial_power(o12, 1))

    def test_form(self, o12):
        """Test d + l_1 x^(p-1) d + l_2 x^(p^2-1) d"""
        form = yao_shu_form(o12, (2, 0))
        assert form.poly == DPElement(o12, {(0,): 1, (4,): 2})


class TestTyurin:
    """Unit tests for the head d^{p^t} + ... + x^(p^n - p^t) h(x) d"""

    def test_reduction(self, o12):
        """Test t = 1 over O(1;2)"""
        poly = DPElement(o12, {(0,): 2, (3,): 1, (7,): 4, (21,): 3})
        D = PEnvelopeElement(o12, poly, (1,))
        result = tyurin_reduce(D)

        assert result.t == 1
        assert result.betas == (2,)
        assert result.form.tails == (1,)
        assert all(a == 0 or a >= 20 for (a,), _ in result.form.poly.items())
        assert result.chain.apply(D) == result.form
        assert len(result.mus) == 5

    def test_needs_p_above_three(self, field3):
        """Test that p = 3 raises"""
        shape = AlgebraShape.one_variable(field3, 2)
        with pytest.raises(PreconditionError):
            tyurin_reduce(PEnvelopeElement.partial_power(shape, 1))

    def test_bad_heads(self, o12):
        """Test t outside 1..n-1 and a non-normalized head"""
        with pytest.raises(PreconditionError):
            tyurin_reduce(PEnvelopeElement.partial_power(o12, 1), t=2)
        with pytest.raises(PreconditionError):
            tyurin_reduce(PEnvelopeElement.partial_power(o12, 1, c=2))

    def test_refuses_restricted_step(self, field5):
        """Test that x^(20) d under d^p in W(1;3)_p has no admissible clearing step"""
        shape = AlgebraShape.one_variable(field5, 3)
        D = PEnvelopeElement(shape, DPElement.monomial(shape, (20,)), (1, 0))

        with pytest.raises(ReductionError, match=r"x\^\(20\) d"):
            tyurin_reduce(D, 1)
        with pytest.raises(ReductionError):
            singular_branch(D)


class TestClassification:
    """Unit tests for the Regular/Singular split"""

    def test_partial_is_regular(self, o12):
        """Test that d^{p^{n-1}} lies outside L_(0)"""
        verdict = classify_nilpotent(PEnvelopeElement.partial_power(o12, 0))

        assert verdict.tag == REGULAR
        assert verdict.regular
        assert verdict.witness == PEnvelopeElement.partial_power(o12, 1)
        assert verdict.form == PEnvelopeElement.partial_power(o12, 0)

    def test_degree_raising_is_singular(self, o12):
        """Test x^(2) d"""
        verdict = classify_nilpotent(PEnvelopeElement.monomial(o12, 2))
        assert verdict.tag == SINGULAR
        assert verdict.in_l0

    def test_toral_is_not_nilpotent(self, o12):
        """Test that x d raises"""
        with pytest.raises(NotNilpotentError):
            classify_nilpotent(PEnvelopeElement.monomial(o12, 1))

    def test_conjugates_of_partial_are_regular(self, o12, rng):
        """Test Phi(d + alpha d^p)"""
        for alphas in ((), (3,)):
            D = conjugate_of_partial(o12, rng, alphas)
            assert classify_nilpotent(D).tag == REGULAR

    def test_witness_and_centralizer(self, o12, rng):
        """Test (d + alpha d^p)^[p] = d^p and the centralizer dimensions"""
        assert regular_witness_check(o12, rng)
        report = centralizer_check(o12, rng)
        assert report["in_witt"] == 1
        assert report["in_envelope"] == 2


class TestEmbedding:
    """Unit tests for W(1;n)_p inside W(n;1)"""

    def test_partial_images(self, o12):
        """Test iota(d) = d_1 + x_1^(p-1) d_2 and iota(d^p) = d_2"""
        target = iota_shape(o12)

        assert target == AlgebraShape.truncated(o12.field, 2)
        assert iota_embedding(PEnvelopeElement.partial_power(o12, 0)) == regular_nilpotent_derivation(target, divided=True)
        assert iota_embedding(PEnvelopeElement.partial_power(o12, 1)) == DerivationElement.partial(target, 1)

    def test_nilpotency_transfers(self, o12, rng):
        """Test that iota preserves nilpotency"""
        for _ in range(5):
            A = random_envelope_element(o12, rng)
            assert is_nilpotent(A) == is_nilpotent(iota_embedding(A))

    def test_iota_check(self, o12, rng):
        """Test the full embedding report"""
        report = iota_check(o12, rng, samples=3)
        assert report["passed"]


class TestEBasis:
    """Unit tests for the e-basis presentation over F_{p^M}"""

    def test_dimensions(self, rng):
        """Test dim L = p^n and dim L_p = p^n + n - 1"""
        zalg = zass_e_algebra(5, 2, 2)

        assert zalg.dim == 25
        assert zalg.jacobi_check(rng, trials=2)
        assert len(zalg.envelope().operators) == 26

    def test_field_compatibility(self):
        """Test that F_{p^n} must embed in F_{p^M}"""
        with pytest.raises(ValueError):
            zass_e_algebra(5, 2, 3)
        with pytest.raises(ValueError):
            zass_e_algebra(5, 2, 1)

    def test_filtration(self):
        """Test that e_alpha - e_0 lies in L_(0) and e_0 does not"""
        zalg = zass_e_algebra(5, 2, 2)
        alpha = zalg.labels[3]

        assert in_e_l0(zalg, zalg.ad(zalg.basis_vector(alpha) - zalg.basis_vector(0)))
        assert not in_e_l0(zalg, zalg.ad(zalg.basis_vector(0)))

    def test_torus(self):
        """Test that e_0 generates a torus of dimension n"""
        certificate = e0_torus(zass_e_algebra(5, 2, 2))

        assert certificate.passed
        assert certificate.semisimple_rank == 2
        assert len(certificate.powers) == 2

    def test_sigma_grading(self):
        """Test sigma(e_alpha) = xi^{-1} e_{xi alpha}"""
        report = sigma_grading_check(zass_e_algebra(5, 2, 2))

        assert report["automorphism"]
        assert report["order_divides_q_minus_1"]
        assert report["passed"]

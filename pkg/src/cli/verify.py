"""
Verification Ledger
===================

Runs the property and reproduction checks of every library package and
collects them in a pandas ledger with one row per check:

    suite | check | reference | passed | detail | elapsed

Checks are registered with ``@check(suite, name, reference)``. Each check
draws from its own substream ``(seed, position in the registry)``, so the
ledger is the same whichever suites are selected. ``full=True`` runs the
acceptance-size sample counts; the default sizes keep a full run short.
A check whose parameters do not apply at the configured prime is recorded
with ``passed = None``.
"""

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.automorphisms import (
    Chain,
    PreconditionError,
    admissibility_check,
    exp_ad,
    lie_g_tangent_check,
    preserves_structure,
    stabilizer_spot_check,
)
from src.cartan_algebras import (
    DerivationElement,
    divergence,
    contact_bracket,
    contact_D_K,
    contact_span_dimension,
    expected_contact_dimension,
    expected_hamiltonian_dimension,
    expected_special_dimension,
    hamiltonian_D_H,
    hamiltonian_span_dimension,
    poisson_bracket,
    regular_nilpotent_derivation,
    regular_power_formula,
    special_D_ij,
    special_span_dimension,
    witt_apply,
    witt_basis,
    witt_bracket,
)
from src.cli.config import SessionConfig
from src.cli.counting import count_nilpotent
from src.cli.families import build_algebra
from src.cli.reduce import run_reduction
from src.cli.sampling import sample_elements
from src.divided_power import (
    AlgebraShape,
    DPElement,
    deglex_compare,
    dp_inverse,
    dp_mul,
    monomials,
    ordinary_monomial,
)
from src.restricted import (
    ad_power_check,
    closure_check,
    is_nilpotent,
    is_regular_witt,
    iterated_pth_power,
    jacobson_sum_check,
    jordan_block_profile,
    jordan_chevalley,
    operator_rank_sequence,
    p_closure,
    psi_relation,
    semilinearity_check,
)
from src.scalars import binom_mod_p, ext_field_make, factorial_mod_p, p_adic_digits
from src.semidirect import (
    ConsistencyError,
    SAlgebra,
    SemidirectElement,
    SemidirectProduct,
    autg1_power_check,
    d0_image_check,
    expad_formula_check,
    g_dimension_check,
    ideal_derivations_check,
    nilpotency_bound_check,
    nilpotency_survey,
    pure_pth_check,
    random_element,
    random_ideal_derivation,
    semi_reduce,
    sl2_line,
    standard_d0,
    torus_power_check,
    z_power_check,
)
from src.utils.logging_config import get_logger
from src.utils.rng import substream
from src.zassenhaus import (
    PEnvelopeElement,
    centralizer_check,
    classification_invariance_check,
    classify_nilpotent,
    e0_torus,
    iota_check,
    random_admissible,
    regular_witness_check,
    sigma_grading_check,
    singular_branch_check,
    singular_separation_check,
    tyurin_reduce,
    zass_e_algebra,
)

logger = get_logger(__name__)

SUITES = ("scalars", "cartan", "restricted", "automorphisms", "semidirect", "zassenhaus")
LEDGER_COLUMNS = ["suite", "check", "reference", "passed", "detail", "elapsed"]


@dataclass
class VerifyContext:
    """Parameters shared by all checks of one run."""

    p: int
    n: int
    M: int
    seed: int
    workers: int
    full: bool = False

    def trials(self, quick: int, full: int) -> int:
        return full if self.full else quick

    @property
    def field(self):
        return ext_field_make(self.p, 1)


CheckResult = Tuple[Optional[bool], str]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    reference: str
    run: Callable[[VerifyContext, np.random.Generator], CheckResult]
    min_p: int = 3


CHECKS: List[Check] = []


def random_poly(shape: AlgebraShape, rng: np.random.Generator, constant: bool = True) -> DPElement:
    values = rng.integers(0, shape.p, size=shape.dim)
    if not constant:
        values[0] = 0
    return DPElement.from_dense(shape, values)


def random_derivation(shape: AlgebraShape, rng: np.random.Generator) -> DerivationElement:
    return DerivationElement.from_dense(shape, rng.integers(0, shape.p, size=shape.m * shape.dim))


def check(suite: str, name: str, reference: str, min_p: int = 3):
    """Register a ledger check."""
    def register(func):
        CHECKS.append(Check(suite, name, reference, func, min_p))
        return func
    return register


# -- scalars ---------------------------------------------------------------

@check("scalars", "lucas_sweep", "C(a,b) mod p is the product of digitwise binomials", min_p=2)
def _lucas_sweep(ctx: VerifyContext, rng) -> CheckResult:
    p = ctx.p
    bound = min(p**4, 625)
    mismatches = [(a, b) for a in range(bound) for b in range(a + 1) if binom_mod_p(a, b, p) != math.comb(a, b) % p]
    # p^r - p^s has digits p - 1 at positions s..r-1, and i < p^s only fills the low digits
    corner = [(p**r - p**s + i, p**r - p**s) for r in range(2, 5) for s in range(1, r) for i in range(p**s)]
    corner_ok = all(binom_mod_p(a, b, p) == 1 for a, b in corner)
    passed = not mismatches and corner_ok
    return passed, f"{bound * (bound + 1) // 2} pairs, {len(mismatches)} mismatches, {len(corner)} corner cases"


@check("scalars", "factorials_and_digits", "Wilson's theorem and base-p expansion", min_p=2)
def _factorials_and_digits(ctx: VerifyContext, rng) -> CheckResult:
    p = ctx.p
    wilson = factorial_mod_p(p - 1, p) == p - 1
    small = all(factorial_mod_p(k, p) == math.factorial(k) % p for k in range(2 * p))
    values = rng.integers(0, p**6, size=ctx.trials(50, 500))
    digits = all(
        sum(d * p**k for k, d in enumerate(p_adic_digits(int(a), p).digits)) == int(a) for a in values
    )
    return wilson and small and digits, f"{len(values)} expansions"


@check("scalars", "extension_field", "F_{p^2} built from the smallest irreducible has p^2 elements", min_p=2)
def _extension_field(ctx: VerifyContext, rng) -> CheckResult:
    spec = ext_field_make(ctx.p, 2)
    gf = spec.gf
    x = gf(rng.integers(1, gf.order, size=ctx.trials(20, 200)))
    frobenius = bool(np.all(x ** (gf.order - 1) == 1))
    return gf.order == ctx.p**2 and frobenius, f"order {gf.order}"


# -- cartan ----------------------------------------------------------------

@check("cartan", "witt_dimension", "dim W(m;n) = m p^|n|")
def _witt_dimension(ctx: VerifyContext, rng) -> CheckResult:
    rows = []
    for heights in ((1,), (1, 1), (2,)):
        summary = build_algebra("witt", ctx.p, 1, heights).summary()
        rows.append(summary["dimension_matches"])
    return all(rows), f"{sum(rows)} of {len(rows)} shapes"


@check("cartan", "special_dimension", "span of D_ij(f) in O(3;1) has dimension 2(p^3 - 1)")
def _special_dimension(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 3)
    found, expected = special_span_dimension(shape), expected_special_dimension(shape)
    return found == expected, f"{found} (expected {expected})"


@check("cartan", "hamiltonian_dimension", "span of D_H(x^(a)), 0 < a < top, in O(2;1) has dimension p^2 - 2")
def _hamiltonian_dimension(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    found, expected = hamiltonian_span_dimension(shape), expected_hamiltonian_dimension(shape)
    return found == expected, f"{found} (expected {expected})"


@check("cartan", "contact_dimension", "span of D_K(x^(a)) in O(3;1) has dimension p^3, or p^3 - 1 when p divides 6")
def _contact_dimension(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 3)
    found, expected = contact_span_dimension(shape), expected_contact_dimension(shape)
    return found == expected, f"{found} (expected {expected})"


@check("cartan", "hamiltonian_brackets", "[D_H(f), D_H(g)] = D_H({f, g})")
def _hamiltonian_brackets(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    trials = ctx.trials(20, 500)
    failures = 0
    for _ in range(trials):
        f, g = random_poly(shape, rng), random_poly(shape, rng)
        if witt_bracket(hamiltonian_D_H(f), hamiltonian_D_H(g)) != hamiltonian_D_H(poisson_bracket(f, g)):
            failures += 1
    return failures == 0, f"{trials} pairs, {failures} failures"


@check("cartan", "contact_brackets", "D_K(<f, g>) = [D_K(f), D_K(g)]")
def _contact_brackets(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 3)
    trials = ctx.trials(10, 500)
    failures = 0
    for _ in range(trials):
        f, g = random_poly(shape, rng), random_poly(shape, rng)
        if contact_D_K(contact_bracket(f, g)) != witt_bracket(contact_D_K(f), contact_D_K(g)):
            failures += 1
    return failures == 0, f"{trials} pairs, {failures} failures"


@check("cartan", "units_and_deglex", "f g = 1 for g the inverse of a unit; DegLex is a total order on O(2;1)")
def _units_and_deglex(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    one = DPElement.one(shape)
    trials = ctx.trials(10, 200)
    failures = 0
    for _ in range(trials):
        f = random_poly(shape, rng, constant=False) + DPElement.constant(shape, int(rng.integers(1, ctx.p)))
        failures += dp_mul(f, dp_inverse(f)) != one
    indices = monomials(shape)
    order = all(deglex_compare(a, b, 1, ctx.p) == -deglex_compare(b, a, 1, ctx.p) for a in indices for b in indices)
    strict = sum(deglex_compare(a, b, 1, ctx.p) == 0 for a in indices for b in indices) == len(indices)
    passed = failures == 0 and order and strict
    return passed, f"{trials} units, {failures} failures, antisymmetric={order} strict={strict}"


@check("cartan", "divergence", "div D_ij(f) = 0 and div [D, E] = D(div E) - E(div D) in W(3;1)")
def _divergence(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 3)
    trials = ctx.trials(5, 100)
    failures = 0
    for _ in range(trials):
        i, j = (int(k) + 1 for k in rng.choice(3, size=2, replace=False))
        special = divergence(special_D_ij(i, j, random_poly(shape, rng))).is_zero()
        D, E = random_derivation(shape, rng), random_derivation(shape, rng)
        lhs = divergence(witt_bracket(D, E))
        rhs = witt_apply(D, divergence(E)) - witt_apply(E, divergence(D))
        failures += not (special and lhs == rhs)
    return failures == 0, f"{trials} draws, {failures} failures"


@check("cartan", "regular_derivation_powers", "p^l-th powers of the regular nilpotent derivation of W(2;1)")
def _regular_derivation_powers(ctx: VerifyContext, rng) -> CheckResult:
    p, m = ctx.p, 2
    shape = AlgebraShape.truncated(ctx.field, m)
    D = regular_nilpotent_derivation(shape)
    formulas = all(iterated_pth_power(D, l) == regular_power_formula(shape, l) for l in range(m))
    vanishes = iterated_pth_power(D, m).is_zero()
    ranks = operator_rank_sequence(D) == [p**m - k for k in range(p**m + 1)]
    value = ordinary_monomial(shape, (p - 1,) * m)
    for _ in range(p**m - 1):
        value = witt_apply(D, value)
    top = value == DPElement.constant(shape, (-1) ** m % p)
    blocks = jordan_block_profile(D) == {p**m: 1}
    regular = is_regular_witt(D) and not is_regular_witt(DerivationElement.partial(shape, 0))
    passed = formulas and vanishes and ranks and top and blocks and regular
    return passed, (f"formulas={formulas} vanishes={vanishes} ranks={ranks} top={top} blocks={blocks} "
                    f"regular={regular}")


# -- restricted ------------------------------------------------------------

@check("restricted", "family_dimensions", "dim W(m;n) = m p^|n|, dim W(1;n)_p = p^n + n - 1, dim g = 3p + 1")
def _family_dimensions(ctx: VerifyContext, rng) -> CheckResult:
    keys = [("witt", ctx.p, 1, (1, 1)), ("sl2-semidirect", ctx.p, 1, (1,))]
    if ctx.p > 3:
        keys.append(("zassenhaus-envelope", ctx.p, 1, (2,)))
    summaries = [build_algebra(*key).summary() for key in keys]
    detail = ", ".join(f"{s['algebra']}={s['dimension']}" for s in summaries)
    return all(s["dimension_matches"] for s in summaries), detail


@check("restricted", "jacobson_formula", "(D + E)^[p] = D^[p] + E^[p] + sum s_i(D, E) in W(2;1)")
def _jacobson_formula(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    trials = ctx.trials(20, 1000)
    failures = sum(not jacobson_sum_check(random_derivation(shape, rng), random_derivation(shape, rng))
                   for _ in range(trials))
    return failures == 0, f"{trials} pairs, {failures} failures"


@check("restricted", "restricted_axioms", "ad(x^[p]) = (ad x)^p and (c x)^[p] = c^p x^[p]")
def _restricted_axioms(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    trials = ctx.trials(5, 50)
    failures = 0
    for _ in range(trials):
        x = random_derivation(shape, rng)
        c = int(rng.integers(1, ctx.p))
        if not (ad_power_check(x) and semilinearity_check(x, c)):
            failures += 1
    return failures == 0, f"{trials} elements, {failures} failures"


@check("restricted", "p_envelope_dimension", "p-closure of W(1;2) in Der O(1;2) has dimension p^2 + 1")
def _p_envelope_dimension(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("zassenhaus-envelope", ctx.p, 1, (2,))
    closure = p_closure(witt_basis(family.shape), family="witt-envelope")
    found = len(closure.operators)
    closed = closure_check(closure)
    return found == family.expected_dimension() and closed, f"{found} (expected {family.expected_dimension()})"


@check("restricted", "jordan_chevalley", "x = x_s + x_n with commuting parts and x_n nilpotent")
def _jordan_chevalley(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 1)
    trials = ctx.trials(5, 50)
    failures = 0
    for _ in range(trials):
        x = random_derivation(shape, rng)
        semisimple, nilpotent = jordan_chevalley(x)
        if semisimple + nilpotent != x or not is_nilpotent(nilpotent):
            failures += 1
    return failures == 0, f"{trials} elements, {failures} failures"


@check("restricted", "psi_relation", "x is nilpotent iff psi_0(x) = ... = psi_{m-1}(x) = 0 in W(2;1)")
def _psi_relation(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("witt", ctx.p, 1, (1, 1))
    trials = ctx.trials(10, 100)
    failures = 0
    for _ in range(trials):
        x = family.propose(rng, "nilpotent")
        if psi_relation(x, e=0, s=2).vanishes() != is_nilpotent(x):
            failures += 1
    return failures == 0, f"{trials} elements, {failures} failures"


@check("restricted", "witt_brute_force_count", "nilpotent points of W(1;1): direct test = psi_0 vanishing, conical")
def _witt_brute_force_count(ctx: VerifyContext, rng) -> CheckResult:
    # p^p points; above p = 5 the quick run samples instead
    mode = "enumerate" if ctx.full or ctx.p**ctx.p <= 10**4 else "sample"
    report = count_nilpotent(("witt", ctx.p, 1, (1,)), mode=mode, samples=2000, seed=ctx.seed, n_jobs=ctx.workers)
    return report.passed, f"{report.nilpotent} of {report.scanned} nilpotent, criterion {report.criterion}"


# -- automorphisms ---------------------------------------------------------

def _round_trips(family, which: str, trials: int, rng, **kwargs) -> CheckResult:
    failures = 0
    for _ in range(trials):
        outcome = run_reduction(family, which, rng=rng, **kwargs)
        if not outcome["replay"]:
            failures += 1
    return failures == 0, f"{trials} runs, {failures} replay failures"


@check("automorphisms", "demushkin_round_trip", "z outside W_(0) conjugates to d_1 + x_1^(p-1) sum phi_i d_i")
def _demushkin_round_trip(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("witt", ctx.p, 1, (1, 1))
    return _round_trips(family, "demushkin", ctx.trials(5, 100), rng)


@check("automorphisms", "premet_round_trip", "regular nilpotent elements of W(2;1) conjugate to the standard one")
def _premet_round_trip(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("witt", ctx.p, 1, (1, 1))
    target = family.serialize(regular_nilpotent_derivation(family.shape))
    trials = ctx.trials(5, 100)
    failures = 0
    for _ in range(trials):
        outcome = run_reduction(family, "premet", rng=rng)
        if not outcome["replay"] or outcome["form"] != target:
            failures += 1
    return failures == 0, f"{trials} runs, {failures} failures"


@check("automorphisms", "stabilizer", "nontrivial elementary moves do not fix the regular nilpotent derivation")
def _stabilizer(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    report = stabilizer_spot_check(shape, rng, trials=ctx.trials(10, 100))
    return report["moved"] == report["trials"], f"{report['moved']} of {report['trials']} moved"


@check("automorphisms", "admissible_automorphisms", "random admissible maps preserve the divided power structure",
       min_p=5)
def _admissible_automorphisms(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.one_variable(ctx.field, 2)
    trials = ctx.trials(5, 50)
    failures = sum(not admissibility_check(random_admissible(shape, rng)) for _ in range(trials))
    return failures == 0, f"{trials} automorphisms, {failures} failures"


@check("automorphisms", "expad_structure", "exp(ad u) preserves brackets and p-th powers")
def _expad_structure(ctx: VerifyContext, rng) -> CheckResult:
    ambient = sl2_line(ctx.field)
    trials = ctx.trials(5, 50)
    failures = 0
    for _ in range(trials):
        f = random_poly(ambient.shape, rng, constant=False)
        u = SemidirectElement.pure(ambient, [int(c) for c in rng.integers(0, ctx.p, size=3)], f)
        x, y = random_element(ambient, rng), random_element(ambient, rng)
        if not preserves_structure(exp_ad(u), x, y):
            failures += 1
    return failures == 0, f"{trials} pairs, {failures} failures"


@check("automorphisms", "expad_witt", "exp(ad c x_2^(k) d_1) is an automorphism of W(2;1); exp(ad d_1) is refused")
def _expad_witt(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    trials = ctx.trials(3, 30)
    failures = 0
    for _ in range(trials):
        k, c = (int(v) for v in rng.integers(1, ctx.p, size=2))
        u = DerivationElement.monomial(shape, (0, k), 0).scale(c)
        x, y = random_derivation(shape, rng), random_derivation(shape, rng)
        failures += not preserves_structure(exp_ad(u), x, y)
    try:
        exp_ad(DerivationElement.partial(shape, 0))
        refused = False
    except PreconditionError:
        refused = True
    return failures == 0 and refused, f"{trials} pairs, {failures} failures, translation refused={refused}"


# -- semidirect ------------------------------------------------------------

@check("semidirect", "g_dimension", "sl_2 x O(1;1) x| k d has dimension 3p + 1")
def _g_dimension(ctx: VerifyContext, rng) -> CheckResult:
    return g_dimension_check(ctx.field), f"dimension {3 * ctx.p + 1}"


@check("semidirect", "nilpotency_criterion", "direct nilpotency agrees with the s_0 criterion; a^[p]^2 = 0")
def _nilpotency_criterion(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("sl2-semidirect", ctx.p, 1, (1,))
    elements = [family.propose(rng, "nilpotent") for _ in range(ctx.trials(50, 2000))]
    try:
        verdicts = nilpotency_survey(elements, n_jobs=ctx.workers)
    except ConsistencyError as exc:
        return False, str(exc)
    bound = nilpotency_bound_check(elements, exponent=2)
    nilpotent = sum(v.direct for v in verdicts)
    passed = bound["violations"] == 0 and bound["nilpotent"] == nilpotent
    return passed, f"{len(elements)} elements, {nilpotent} nilpotent, {bound['violations']} bound violations"


@check("semidirect", "pth_power_identities",
       "(y x g)^[p] = y^[p] x g^p, (h x g + c d)^[p] and (c d + b x x^(p-1))^[p] closed forms")
def _pth_power_identities(ctx: VerifyContext, rng) -> CheckResult:
    g = sl2_line(ctx.field)
    p = ctx.p
    trials = ctx.trials(5, 100)
    failures = 0
    for _ in range(trials):
        y = [int(c) for c in rng.integers(0, p, size=3)]
        f = random_poly(g.shape, rng)
        coeffs = [int(c) for c in rng.integers(0, p, size=p)]
        lam = int(rng.integers(0, p))
        b = [int(c) for c in rng.integers(0, p, size=3)]
        ok = pure_pth_check(g, y, f) and torus_power_check(g, coeffs, lam)
        ok = ok and autg1_power_check(g, int(rng.integers(1, p)), b)["passed"]
        failures += not ok
    return failures == 0, f"{trials} draws, {failures} failures"


@check("semidirect", "expad_formula", "exp(ad(s x f))(d) = d - s x d(f) - s^[p] x f^(p-1) d(f)")
def _expad_formula(ctx: VerifyContext, rng) -> CheckResult:
    ambient = sl2_line(ctx.field)
    d = DerivationElement.partial(ambient.shape, 0)
    trials = ctx.trials(10, 200)
    failures = 0
    for _ in range(trials):
        s_tilde = [int(c) for c in rng.integers(0, ctx.p, size=3)]
        f = random_poly(ambient.shape, rng, constant=False)
        failures += not expad_formula_check(ambient, s_tilde, f, d)
    return failures == 0, f"{trials} pairs, {failures} failures"


@check("semidirect", "d0_image", "I + d_0(O(2;1)) has codimension 1, complemented by x_1^(p-1)")
def _d0_image(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    reports = [d0_image_check(shape, s) for s in (1, 2)]
    return all(r["passed"] for r in reports), ", ".join(f"dim M = {r['dim_M']}" for r in reports)


@check("semidirect", "ideal_derivations", "I d_1 + I d_2 is ad d_0-invariant and closed; z^[p]^s lies in W_(0)")
def _ideal_derivations(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    report = ideal_derivations_check(shape, 1, rng, samples=ctx.trials(3, 10))
    z = standard_d0(shape, 1) + random_ideal_derivation(shape, 1, rng)
    power = z_power_check(z, 1)
    return report["passed"] and power, f"{len(report['failures'])} closure failures, z power in W_(0): {power}"


@check("semidirect", "semi_reduce_round_trip", "exp(ad) chain clears every monomial but x_1^(p-1) in sl_2 x O(2;1)")
def _semi_reduce_round_trip(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.truncated(ctx.field, 2)
    ambient = SemidirectProduct(SAlgebra.sl2(ctx.field), shape)
    trials = ctx.trials(3, 100)
    failures = 0
    for _ in range(trials):
        lam = int(rng.integers(1, ctx.p))
        tail = standard_d0(shape, 1).scale(lam) + random_ideal_derivation(shape, 1, rng)
        D = random_element(ambient, rng, density=0.5, tail=tail)
        result = semi_reduce(D, s=1)
        chain = Chain.parse(result.chain.serialize(), shape, lambda text: SemidirectElement.parse(text, ambient))
        if chain.apply(D) != result.form or result.lam != lam:
            failures += 1
    return failures == 0, f"{trials} runs, {failures} failures"


@check("semidirect", "semidirect_reduce_command", "the reduce command replays on sl_2 x O(1;1) x| k d")
def _semidirect_reduce_command(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("sl2-semidirect", ctx.p, 1, (1,))
    return _round_trips(family, "semidirect", ctx.trials(3, 50), rng)


# -- zassenhaus ------------------------------------------------------------

def _e_algebra(ctx: VerifyContext):
    return zass_e_algebra(ctx.p, ctx.n, ctx.M)


@check("zassenhaus", "e0_torus", "e_0^[p]^n = e_0 and e_0, ..., e_0^[p]^(n-1) span a torus", min_p=5)
def _e0_torus(ctx: VerifyContext, rng) -> CheckResult:
    zalg = _e_algebra(ctx)
    certificate = e0_torus(zalg)
    jacobi = zalg.jacobi_check(rng, trials=ctx.trials(3, 20))
    return certificate.passed and jacobi, f"periodic={certificate.periodic} independent={certificate.independent}"


@check("zassenhaus", "lie_g_tangents", "tangents of x -> x + t x^(i+1) give p^n - n independent derivations",
       min_p=5)
def _lie_g_tangents(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.one_variable(ctx.field, ctx.n)
    report = lie_g_tangent_check(shape)
    return report["passed"], ", ".join(f"{k}={v}" for k, v in report.items() if k != "passed")


@check("zassenhaus", "sigma_grading", "sigma(e_a) = e_(xi a) is an automorphism with one eigenvalue per power of xi",
       min_p=5)
def _sigma_grading(ctx: VerifyContext, rng) -> CheckResult:
    report = sigma_grading_check(_e_algebra(ctx))
    return report["passed"], f"automorphism={report['automorphism']} multiplicities={report['multiplicities_match']}"


@check("zassenhaus", "singular_separation", "V = T + k u meets the singular nilpotent elements only in 0", min_p=5)
def _singular_separation(ctx: VerifyContext, rng) -> CheckResult:
    report = singular_separation_check(ctx.p, ctx.n, ctx.M, n_jobs=ctx.workers)
    return report.passed, f"{report.points} points, {report.nilpotent} nilpotent, {report.singular} singular"


@check("zassenhaus", "iota_embedding", "O(1;n) = O(n;1) carries W(1;n)_p into W(n;1) as a restricted map", min_p=5)
def _iota_embedding(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.one_variable(ctx.field, ctx.n)
    report = iota_check(shape, rng, samples=ctx.trials(3, 20))
    return report["passed"], ", ".join(f"{k}={v}" for k, v in report.items() if k != "passed")


@check("zassenhaus", "centralizer", "centralizer of d + sum c_i d^(p^i): dimension 1 in W(1;n), n in W(1;n)_p",
       min_p=5)
def _centralizer(ctx: VerifyContext, rng) -> CheckResult:
    report = centralizer_check(AlgebraShape.one_variable(ctx.field, ctx.n), rng)
    return report["passed"], f"in W: {report['in_witt']}, in envelope: {report['in_envelope']}"


@check("zassenhaus", "yao_shu_round_trip", "alpha_0 d + f d conjugates to d + sum l_i x^(p^i - 1) d", min_p=5)
def _yao_shu_round_trip(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("zassenhaus-envelope", ctx.p, 1, (ctx.n,))
    return _round_trips(family, "yao-shu", ctx.trials(5, 100), rng)


@check("zassenhaus", "tyurin_round_trip", "d^(p^t) + lower terms conjugates to d^(p^t) + x^(p^n - p^t) h(x) d",
       min_p=5)
def _tyurin_round_trip(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("zassenhaus-envelope", ctx.p, 1, (2,))
    shape, p = family.shape, ctx.p
    example = PEnvelopeElement(shape, DPElement.variable(shape, 0), [1])
    result = tyurin_reduce(example, 1)
    offset = p**2 - p
    shaped = result.form.tails == (1,) and all(a[0] >= offset for a in result.form.poly.terms)
    passed, detail = _round_trips(family, "tyurin", ctx.trials(5, 100), rng, t=1)
    return passed and shaped, f"{detail}; d^p + x d reaches the factored form: {shaped}"


@check("zassenhaus", "regular_singular_split", "Regular iff D^[p]^(n-1) lies outside L_(0); both branches agree",
       min_p=5)
def _regular_singular_split(ctx: VerifyContext, rng) -> CheckResult:
    shape = AlgebraShape.one_variable(ctx.field, ctx.n)
    branches = singular_branch_check(shape, rng, samples=ctx.trials(5, 20))
    witnesses = regular_witness_check(shape, rng, samples=ctx.trials(3, 10))
    return branches["passed"] and witnesses, f"{branches['tested']} singular branches, regular witnesses {witnesses}"


@check("zassenhaus", "classifier_invariance", "admissible automorphisms preserve the Regular/Singular class", min_p=5)
def _classifier_invariance(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("zassenhaus-envelope", ctx.p, 1, (ctx.n,))
    elements = []
    target = ctx.trials(10, 200)
    while len(elements) < target:
        candidate = family.propose(rng, "nilpotent")
        if family.is_nilpotent(candidate):
            elements.append(candidate)
    report = classification_invariance_check(elements, rng)
    regular = sum(classify_nilpotent(x).regular for x in elements)
    return report["disagreed"] == 0, f"{report['agreed']} kept their class, {regular} regular"


@check("zassenhaus", "regular_sampling", "sampled regular nilpotent elements re-classify as Regular", min_p=5)
def _regular_sampling(ctx: VerifyContext, rng) -> CheckResult:
    family = build_algebra("zassenhaus-envelope", ctx.p, 1, (ctx.n,))
    samples = sample_elements(family.key, "regular-nilpotent", count=ctx.trials(3, 20), seed=ctx.seed,
                              n_jobs=ctx.workers)
    regular = sum(classify_nilpotent(family.parse(s.element)).regular for s in samples)
    return regular == len(samples), f"{regular} of {len(samples)} Regular"


def context_from_config(config: SessionConfig, full: bool = False) -> VerifyContext:
    n = config.algebra.n if config.family == "zassenhaus-envelope" else 2
    return VerifyContext(p=config.p, n=n, M=config.e_algebra_degree(), seed=config.run.seed,
                         workers=config.run.workers, full=full)


def _run_check(position: int, item: Check, ctx: VerifyContext) -> dict:
    start = time.time()
    if ctx.p < item.min_p:
        passed, detail = None, f"skipped: needs p >= {item.min_p}"
    else:
        try:
            passed, detail = item.run(ctx, substream(ctx.seed, position))
            passed = bool(passed)
        except Exception as exc:
            logger.error(f"Check {item.suite}.{item.name} raised {type(exc).__name__}: {exc}")
            passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = round(time.time() - start, 3)
    if passed is False:
        logger.error(f"FAILED {item.suite}.{item.name}: {detail}")
    else:
        logger.info(f"{item.suite}.{item.name}: {detail}")
    return {"suite": item.suite, "check": item.name, "reference": item.reference, "passed": passed,
            "detail": detail, "elapsed": elapsed}


def run_verification(config: SessionConfig, suite: str = "all", full: bool = False) -> pd.DataFrame:
    """Run every check of ``suite`` (or all suites) and return the ledger."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"Unknown suite {suite!r}; choose all or one of {', '.join(SUITES)}")
    ctx = context_from_config(config, full)
    logger.info(f"Verification: suite={suite}, p={ctx.p}, n={ctx.n}, M={ctx.M}, seed={ctx.seed}")
    rows = [_run_check(position, item, ctx) for position, item in enumerate(CHECKS)
            if suite == "all" or item.suite == suite]
    ledger = pd.DataFrame(rows, columns=LEDGER_COLUMNS)
    failed = int((ledger["passed"] == False).sum())  # noqa: E712
    logger.info(f"Verification finished: {len(ledger)} checks, {failed} failed")
    return ledger


def ledger_passed(ledger: pd.DataFrame) -> bool:
    """True when no check failed; skipped checks do not count."""
    return not bool((ledger["passed"] == False).any())  # noqa: E712

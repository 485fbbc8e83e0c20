"""
Zassenhaus Algebra in the e-Basis
=================================

W(1;n) over F_{p^M} (M >= n) with basis e_alpha, alpha in F_q, q = p^n, and

    [e_alpha, e_beta] = (beta - alpha) e_{alpha + beta}.

Everything is done on the adjoint representation: ad L is faithful, its
p-closure in gl(L) is the minimal p-envelope L_p of dimension p^n + n - 1.
The standard filtration is read through e_alpha = (1 + x)^{alpha + 1} d: an
element sum c_alpha e_alpha lies in L_(0) exactly when sum c_alpha = 0.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import galois
import numpy as np
from joblib import Parallel, delayed

from src.restricted import OperatorSpanAlgebra, p_closure, semisimple_rank
from src.restricted.realization import commutator
from src.scalars import FieldSpec, ext_field_make
from src.utils.linalg import SpanDecomposer, as_ints, is_zero, kernel_basis, matrix_power, rank, stack_rows
from src.utils.logging_config import get_logger
from src.zassenhaus.errors import CertificateError

logger = get_logger(__name__)


class ZassenhausEAlgebra:
    """L = span{e_alpha : alpha in F_q} inside F_{p^M}; coordinates follow ``labels``."""

    def __init__(self, p: int, n: int, M: int):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if M < n or M % n:
            raise ValueError(f"F_{p}^{n} must embed in F_{p}^{M}: need n | M, got n = {n}, M = {M}")
        self.p, self.n, self.M = p, n, M
        self.spec: FieldSpec = ext_field_make(p, M)
        self.field = self.spec.gf
        self.q = p**n
        everything = self.field(np.arange(p**M))
        self.labels: List[int] = [int(a) for a in as_ints(everything[everything**self.q == everything])]
        self.index: Dict[int, int] = {a: i for i, a in enumerate(self.labels)}
        self._envelope: Optional[OperatorSpanAlgebra] = None
        self.ad_basis = [self._ad_of_basis(i) for i in range(self.q)]
        logger.info(f"Zassenhaus algebra: p = {p}, n = {n}, over F_{p}^{M}, dimension {self.q}")

    @property
    def dim(self) -> int:
        return self.q

    @property
    def basis_tag(self) -> str:
        return f"adjoint:zassenhaus(p={self.p};n={self.n};{self.spec.serialize()})"

    def scalar(self, alpha: int) -> galois.FieldArray:
        return self.field(alpha)

    def basis_vector(self, alpha: int, c=1) -> galois.FieldArray:
        """c e_alpha for alpha given by its integer encoding."""
        vector = self.field.Zeros(self.q)
        vector[self.index[int(alpha)]] = c
        return vector

    def _ad_of_basis(self, i: int) -> galois.FieldArray:
        gf = self.field
        alpha = gf(self.labels[i])
        matrix = gf.Zeros((self.q, self.q))
        for j, b in enumerate(self.labels):
            beta = gf(b)
            coeff = beta - alpha
            if coeff != 0:
                matrix[self.index[int(alpha + beta)], j] = coeff
        return matrix

    def ad(self, x: galois.FieldArray) -> galois.FieldArray:
        result = self.field.Zeros((self.q, self.q))
        for c, op in zip(x, self.ad_basis):
            if c != 0:
                result = result + c * op
        return result

    def bracket(self, x: galois.FieldArray, y: galois.FieldArray) -> galois.FieldArray:
        return self.ad(x) @ y

    def random_vector(self, rng: np.random.Generator) -> galois.FieldArray:
        return self.field(rng.integers(0, self.field.order, size=self.q))

    def jacobi_check(self, rng: np.random.Generator, trials: int = 5) -> bool:
        for _ in range(trials):
            x, y, z = (self.random_vector(rng) for _ in range(3))
            total = (
                self.bracket(x, self.bracket(y, z))
                + self.bracket(y, self.bracket(z, x))
                + self.bracket(z, self.bracket(x, y))
            )
            if not is_zero(total):
                logger.error("Jacobi identity fails in the e-basis")
                return False
        return True

    def envelope(self) -> OperatorSpanAlgebra:
        """p-closure of ad L in gl(L)."""
        if self._envelope is None:
            self._envelope = p_closure(self.ad_basis, basis_tag=self.basis_tag, family="zassenhaus-e",
                                       constants=(None, self.n))
            expected = self.q + self.n - 1
            if len(self._envelope.operators) != expected:
                logger.warning(f"p-closure has dimension {len(self._envelope.operators)}, expected {expected}")
        return self._envelope

    def generator(self) -> galois.FieldArray:
        """xi generating F_q^*."""
        return self.field.primitive_element ** ((self.field.order - 1) // (self.q - 1))

    def l0_decomposer(self) -> SpanDecomposer:
        """Operators ad(e_alpha - e_0), alpha != 0: a basis of ad L_(0)."""
        e0 = self.ad_basis[self.index[0]]
        rows = [(op - e0).reshape(-1) for i, op in enumerate(self.ad_basis) if self.labels[i] != 0]
        return SpanDecomposer(stack_rows(self.field, rows, self.q * self.q))

    def __repr__(self):
        return f"ZassenhausEAlgebra(p={self.p}, n={self.n}, M={self.M})"


@lru_cache(maxsize=None)
def zass_e_algebra(p: int, n: int, M: int) -> ZassenhausEAlgebra:
    return ZassenhausEAlgebra(p, n, M)


def in_e_l0(zalg: ZassenhausEAlgebra, operator: galois.FieldArray) -> bool:
    """Operator in ad L_(0); anything outside ad L is outside L_(0)."""
    return _l0(zalg).contains(operator.reshape(-1))


@lru_cache(maxsize=None)
def _l0(zalg: ZassenhausEAlgebra) -> SpanDecomposer:
    return zalg.l0_decomposer()


@dataclass
class TorusCertificate:
    powers: List[galois.FieldArray]
    periodic: bool
    independent: bool
    commuting: bool
    in_envelope: bool
    semisimple_rank: int

    @property
    def passed(self) -> bool:
        return self.periodic and self.independent and self.commuting and self.in_envelope


def e0_torus(zalg: ZassenhausEAlgebra) -> TorusCertificate:
    """
    e_0, e_0^[p], ..., e_0^[p^{n-1}] with e_0^[p^n] = e_0.

    Raises CertificateError if any part fails.
    """
    p, n = zalg.p, zalg.n
    e0 = zalg.ad_basis[zalg.index[0]]
    powers = [e0]
    for _ in range(n):
        powers.append(matrix_power(powers[-1], p))
    periodic = np.array_equal(as_ints(powers[n]), as_ints(e0))
    torus = powers[:n]
    independent = rank(stack_rows(zalg.field, [t.reshape(-1) for t in torus])) == n
    commuting = all(is_zero(commutator(a, b)) for i, a in enumerate(torus) for b in torus[:i])
    envelope = zalg.envelope()
    in_envelope = all(envelope.contains(t) for t in torus)
    srank = semisimple_rank(envelope.decompose(e0))
    certificate = TorusCertificate(torus, periodic, independent, commuting, in_envelope, srank)
    if not certificate.passed or srank != n:
        logger.error(f"Torus certificate failed: {certificate}")
        raise CertificateError("e_0 does not generate an n-dimensional torus")
    logger.info(f"e_0 torus verified: dimension {n}, period p^{n}")
    return certificate


def sigma_matrix(zalg: ZassenhausEAlgebra) -> galois.FieldArray:
    """sigma(e_alpha) = xi^{-1} e_{xi alpha}."""
    gf = zalg.field
    xi = zalg.generator()
    inverse = xi**-1
    matrix = gf.Zeros((zalg.q, zalg.q))
    for j, a in enumerate(zalg.labels):
        matrix[zalg.index[int(xi * gf(a))], j] = inverse
    return matrix


def _multiplicities(zalg: ZassenhausEAlgebra, matrix: galois.FieldArray, size: int) -> Dict[int, int]:
    """xi-exponent k -> dim ker(matrix - xi^k) for k in 0..q-2."""
    gf, xi = zalg.field, zalg.generator()
    identity = gf.Identity(matrix.shape[0])
    table = {}
    for k in range(zalg.q - 1):
        mult = size - rank(matrix - (xi**k) * identity)
        if mult:
            table[k] = mult
    return table


def sigma_grading_check(zalg: ZassenhausEAlgebra) -> Dict[str, object]:
    """sigma is an automorphism of L and L_p of order dividing q - 1; eigenvalue xi^{-1} is the only double one."""
    q = zalg.q
    P = sigma_matrix(zalg)
    P_inv = np.linalg.inv(P)
    automorphism = all(
        np.array_equal(as_ints(P @ op), as_ints(zalg.ad(P[:, i]) @ P)) for i, op in enumerate(zalg.ad_basis)
    )
    envelope = zalg.envelope()
    extends = all(envelope.contains(P @ op @ P_inv) for op in envelope.operators)
    order_ok = np.array_equal(as_ints(matrix_power(P, q - 1)), as_ints(zalg.field.Identity(q)))
    multiplicities = _multiplicities(zalg, P, q)
    expected = {k: 1 for k in range(q - 1)}
    expected[q - 2] = 2
    # sigma restricted to L_(0), in the basis e_alpha - e_0
    l0_basis = [zalg.basis_vector(a) - zalg.basis_vector(0) for a in zalg.labels if a != 0]
    B = zalg.field(np.column_stack([as_ints(v) for v in l0_basis]))
    restricted = SpanDecomposer(B.T)
    images = [restricted.coordinates(P @ v) for v in l0_basis]
    P0 = zalg.field(np.column_stack([as_ints(v) for v in images]))
    l0_multiplicities = _multiplicities(zalg, P0, q - 1)
    report = {
        "automorphism": automorphism,
        "extends_to_envelope": extends,
        "order_divides_q_minus_1": order_ok,
        "multiplicities": multiplicities,
        "l0_multiplicities": l0_multiplicities,
        "multiplicities_match": multiplicities == expected and l0_multiplicities == {k: 1 for k in range(q - 1)},
    }
    report["passed"] = all(report[key] for key in ("automorphism", "extends_to_envelope", "order_divides_q_minus_1",
                                                   "multiplicities_match"))
    if not report["passed"]:
        logger.error(f"sigma grading check failed: {report}")
    return report


@dataclass
class ToralElement:
    """u spanning the sigma-fixed line of L_(0); ``toral`` when u^[p] = u after rescaling."""

    vector: galois.FieldArray
    operator: galois.FieldArray
    ratio: galois.FieldArray
    toral: bool = field(default=False)


def sigma_fixed_toral(zalg: ZassenhausEAlgebra) -> ToralElement:
    """The sigma-fixed element u of L_(0), rescaled to u^[p] = u when a (p-1)-th root allows it."""
    gf, p = zalg.field, zalg.p
    P = sigma_matrix(zalg)
    fixed = kernel_basis(P - gf.Identity(zalg.q))
    if len(fixed) != 1:
        raise CertificateError(f"sigma-fixed space has dimension {len(fixed)}, expected 1")
    vector = fixed[0]
    operator = zalg.ad(vector)
    if not in_e_l0(zalg, operator):
        raise CertificateError("sigma-fixed element is not in L_(0)")
    power = matrix_power(operator, p)
    pivot = int(np.flatnonzero(as_ints(operator).reshape(-1))[0])
    ratio = power.reshape(-1)[pivot] / operator.reshape(-1)[pivot]
    if ratio == 0 or not np.array_equal(as_ints(power), as_ints(ratio * operator)):
        raise CertificateError("u^[p] is not a nonzero multiple of u")
    for t in gf.elements[1:]:
        if t ** (p - 1) * ratio == 1:
            vector, operator = t * vector, t * operator
            logger.debug(f"Rescaled u by {int(t)} to make it toral")
            return ToralElement(vector, operator, ratio, toral=True)
    logger.warning(f"No (p-1)-th root of 1/{int(ratio)} in F_{p}^{zalg.M}; u is kept semisimple but not toral")
    return ToralElement(vector, operator, ratio)


@dataclass
class SeparationReport:
    points: int
    nilpotent: int
    singular: int
    witnesses: List[int]
    u_toral: bool

    @property
    def passed(self) -> bool:
        return not self.witnesses and self.singular == 1


@lru_cache(maxsize=None)
def _separation_basis(p: int, n: int, M: int) -> List[galois.FieldArray]:
    """Operators e_0, e_0^[p], ..., e_0^[p^{n-1}], u spanning V."""
    zalg = zass_e_algebra(p, n, M)
    torus = e0_torus(zalg).powers
    u = sigma_fixed_toral(zalg)
    return list(torus) + [u.operator]


def _decode_point(index: int, base: int, length: int) -> List[int]:
    digits = []
    for _ in range(length):
        index, digit = divmod(index, base)
        digits.append(digit)
    return digits


def _separation_chunk(p: int, n: int, M: int, start: int, stop: int) -> Tuple[int, int, List[int]]:
    """(nilpotent count, singular count, nonzero singular indices) on points start..stop-1 of V."""
    zalg = zass_e_algebra(p, n, M)
    basis = _separation_basis(p, n, M)
    gf = zalg.field
    nilpotent, singular, witnesses = 0, 0, []
    for index in range(start, stop):
        coords = _decode_point(index, gf.order, len(basis))
        X = gf.Zeros((zalg.q, zalg.q))
        for c, op in zip(coords, basis):
            if c:
                X = X + gf(c) * op
        top = X
        for _ in range(n - 1):
            top = matrix_power(top, p)
        if not is_zero(matrix_power(top, p)):
            continue
        nilpotent += 1
        if in_e_l0(zalg, top):
            singular += 1
            if index:
                witnesses.append(index)
    return nilpotent, singular, witnesses


def singular_separation_check(p: int, n: int, M: int, n_jobs: int = 1, chunks: Optional[int] = None) -> SeparationReport:
    """
    Enumerate every F_{p^M}-point of V = T + k u and count those in N_sing.

    Only the origin may be singular. Chunks of the point grid run in joblib
    worker processes; each worker rebuilds the algebra from (p, n, M).
    """
    zalg = zass_e_algebra(p, n, M)
    u = sigma_fixed_toral(zalg)
    total = zalg.field.order ** (n + 1)
    chunks = chunks or max(1, n_jobs) * 4
    bounds = np.linspace(0, total, chunks + 1, dtype=np.int64)
    logger.info(f"Separation check: {total} points of V over F_{p}^{M} in {chunks} chunks, {n_jobs} worker(s)")
    results = Parallel(n_jobs=n_jobs)(
        delayed(_separation_chunk)(p, n, M, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
    )
    nilpotent = sum(r[0] for r in results)
    singular = sum(r[1] for r in results)
    witnesses = sorted(w for r in results for w in r[2])
    report = SeparationReport(total, nilpotent, singular, witnesses, u.toral)
    if not report.passed:
        logger.error(f"V meets N_sing outside 0: {witnesses[:10]}")
    else:
        logger.info(f"Separation check passed: {nilpotent} nilpotent points, only 0 singular")
    return report

"""F_q-linear rank-metric codes as spaces of m x n matrices over F_q.

A code stores a canonical basis (the RREF of the flattened basis matrices in
F_q^{mn}), never the codeword set; enumeration happens on demand under an
explicit budget.  Codewords over GF(2) are walked as lists of packed bit-rows
with one basis-matrix XOR per step; other fields use code lists with one
row-add per step.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    EmptyCode,
    HypothesisViolated,
    InvalidParams,
    NotMRD,
    ParamMismatch,
    RankDeficientA,
    ShapeMismatch,
)
from .fields import Field
from .fqlinalg import Mat, SubspaceBasis, kernel, mat_mul, prime_basis_codes, qbinom, rref

DEFAULT_CODEWORD_BUDGET = 1 << 24
FIELD_CHECK_LIMIT = 1 << 16
FIELD_CHECK_SAMPLES = 64


def _flatten_mat(rows) -> list[int]:
    out: list[int] = []
    for r in rows:
        out.extend(r)
    return out


def _reshape(vec, m: int, n: int):
    return tuple(tuple(vec[i * n:(i + 1) * n]) for i in range(m))


def _rank_bits(rows) -> int:
    piv: dict[int, int] = {}
    rk = 0
    for row in rows:
        while row:
            low = row & -row
            other = piv.get(low)
            if other is None:
                piv[low] = row
                rk += 1
                break
            row ^= other
    return rk


def _rank_rows(rows, F: Field) -> int:
    sub, mul, inv = F.sub, F.mul, F.inv
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    rk = 0
    for c in range(ncols):
        piv = None
        for i in range(rk, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[rk], work[piv] = work[piv], work[rk]
        lead = inv(work[rk][c])
        prow = [mul(lead, x) for x in work[rk]]
        work[rk] = prow
        for i in range(rk + 1, len(work)):
            f = work[i][c]
            if f:
                work[i] = [sub(x, mul(f, y)) for x, y in zip(work[i], prow)]
        rk += 1
        if rk == len(work):
            break
    return rk


@dataclass(eq=False)
class RankCode:
    """An F_q-linear rank-metric code with canonical flattened basis."""

    field: Field
    m: int
    n: int
    flat: SubspaceBasis

    def __post_init__(self):
        self._min_distance: int | None = None
        self._rank_distribution: RankDistribution | None = None

    @classmethod
    def from_generators(cls, F: Field, m: int, n: int, mats) -> "RankCode":
        """Span of the given m x n matrices (generators may be dependent)."""
        vecs = []
        for M in mats:
            rows = M.data if isinstance(M, Mat) else M
            if len(rows) != m or any(len(r) != n for r in rows):
                raise ShapeMismatch("generator has wrong shape")
            vecs.append(_flatten_mat(rows))
        return cls(F, m, n, SubspaceBasis.from_vectors(F, m * n, vecs))

    @property
    def dim(self) -> int:
        return self.flat.dim

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def size(self) -> int:
        return self.q**self.dim

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.q)

    def basis_matrices(self) -> list[tuple[tuple[int, ...], ...]]:
        return [_reshape(v, self.m, self.n) for v in self.flat.rows]

    def contains(self, rows) -> bool:
        return self.flat.contains(_flatten_mat(rows))

    def __eq__(self, other):
        return (isinstance(other, RankCode) and self.params == other.params
                and self.flat == other.flat)

    def __hash__(self):
        return hash((self.params, self.flat))

    # -- enumeration ---------------------------------------------------------

    def _check_budget(self, budget: int) -> None:
        if self.size > budget:
            raise BudgetExceeded(self.size, budget, "codewords")

    def _scan_ranks(self, budget: int, stop_at: int | None = None):
        """Yield the rank of every nonzero codeword (odometer walk)."""
        self._check_budget(budget)
        K = self.dim
        if self.field.order == 2:
            mats = [[_pack_bits(row) for row in M] for M in self.basis_matrices()]
            cur = [0] * self.m
            digits = [0] * K
            for _ in range(2**K - 1):
                i = 0
                while digits[i] == 1:
                    digits[i] = 0
                    mi = mats[i]
                    for rr in range(self.m):
                        cur[rr] ^= mi[rr]
                    i += 1
                digits[i] = 1
                mi = mats[i]
                for rr in range(self.m):
                    cur[rr] ^= mi[rr]
                rk = _rank_bits(cur)
                yield rk
                if stop_at is not None and rk <= stop_at:
                    return
        else:
            F = self.field
            add, mul = F.add, F.mul
            p = F.p
            mats = []
            for M in self.basis_matrices():
                for b in prime_basis_codes(F):
                    mats.append([[mul(b, x) if x else 0 for x in row] for row in M])
            cur = [[0] * self.n for _ in range(self.m)]
            digits = [0] * len(mats)
            for _ in range(p ** len(mats) - 1):
                i = 0
                while digits[i] == p - 1:
                    digits[i] = 0
                    _add_mat(cur, mats[i], add)
                    i += 1
                digits[i] += 1
                _add_mat(cur, mats[i], add)
                rk = _rank_rows(cur, F)
                yield rk
                if stop_at is not None and rk <= stop_at:
                    return

    def min_distance(self, *, budget: int = DEFAULT_CODEWORD_BUDGET) -> int:
        """Minimum rank over nonzero codewords (= minimum distance)."""
        if self.dim == 0:
            raise EmptyCode("the zero code has no nonzero codewords")
        if self._min_distance is None:
            best = min(self.m, self.n)
            for rk in self._scan_ranks(budget, stop_at=1):
                if rk < best:
                    best = rk
                    if best == 1:
                        break
            self._min_distance = best
        return self._min_distance

    def rank_distribution(self, *, budget: int = DEFAULT_CODEWORD_BUDGET
                          ) -> "RankDistribution":
        if self._rank_distribution is None:
            counts = [0] * (min(self.m, self.n) + 1)
            counts[0] = 1
            for rk in self._scan_ranks(budget):
                counts[rk] += 1
            dist = RankDistribution(tuple(counts), self.m, self.n, self.q, self.dim)
            dist.validate()
            self._rank_distribution = dist
            if self.dim > 0 and self._min_distance is None:
                self._min_distance = dist.min_distance()
        return self._rank_distribution

    def is_mrd(self, *, budget: int = DEFAULT_CODEWORD_BUDGET) -> bool:
        """Singleton-like bound met with equality: |C| = q^{n'(m'-d+1)}."""
        d = self.min_distance(budget=budget)
        return self.dim == max(self.m, self.n) * (min(self.m, self.n) - d + 1)


def _pack_bits(row) -> int:
    b = 0
    for j, x in enumerate(row):
        if x:
            b |= 1 << j
    return b


def _add_mat(cur, mat, add) -> None:
    for r, row in enumerate(mat):
        crow = cur[r]
        for j, x in enumerate(row):
            if x:
                crow[j] = add(crow[j], x)


@dataclass(frozen=True)
class RankDistribution:
    """Exact rank histogram A_i = #{codewords of rank i}, big-integer exact."""

    A: tuple[int, ...]
    m: int
    n: int
    q: int
    K: int

    def validate(self) -> None:
        if sum(self.A) != self.q**self.K:
            raise InvalidParams("rank distribution does not sum to q^K")
        if self.A[0] != 1:
            raise InvalidParams("A_0 must be 1")

    def min_distance(self) -> int:
        for i in range(1, len(self.A)):
            if self.A[i]:
                return i
        raise EmptyCode("zero code")


def mrd_weight_distribution(m: int, n: int, q: int, d: int) -> RankDistribution:
    """Closed-form rank distribution of an MRD (m,n,q;d) code.

    A_{d+l} = [m' d+l] * sum_t (-1)^{t-l} [l+d l-t] q^binom(l-t,2) (q^{n'(t+1)}-1)
    with m' = min(m,n), n' = max(m,n); the total is q^{n'(m'-d+1)}.
    """
    if m < 1 or n < 1 or q < 2:
        raise InvalidParams("need m, n >= 1 and q >= 2")
    mp, np_ = min(m, n), max(m, n)
    if not 1 <= d <= mp + 1:
        raise InvalidParams(f"distance d={d} out of range 1..{mp + 1}")
    A = [0] * (mp + 1)
    A[0] = 1
    for ell in range(0, mp - d + 1):
        s = 0
        for t in range(0, ell + 1):
            term = (qbinom(ell + d, ell - t, q) * q ** ((ell - t) * (ell - t - 1) // 2)
                    * (q ** (np_ * (t + 1)) - 1))
            s += term if (t - ell) % 2 == 0 else -term
        A[d + ell] = qbinom(mp, d + ell, q) * s
    dist = RankDistribution(tuple(A), m, n, q, np_ * (mp - d + 1))
    if sum(A) != q ** (np_ * (mp - d + 1)):
        raise InvalidParams("weight distribution failed the cardinality check")
    return dist


def adjoint(C: RankCode) -> RankCode:
    """Transpose of every codeword; an (n,m,q) code with the same distance."""
    mats = [[list(col) for col in zip(*M)] for M in C.basis_matrices()]
    out = RankCode.from_generators(C.field, C.n, C.m, mats)
    out._min_distance = C._min_distance
    return out


def delsarte_dual_code(C: RankCode) -> RankCode:
    """Orthogonal complement under <M,N> = Tr(M N^t), i.e. the entrywise
    dot product of flattened matrices; dim = mn - K."""
    mn = C.m * C.n
    if C.dim == 0:
        ident = Mat.identity(C.field, mn)
        return RankCode.from_generators(
            C.field, C.m, C.n, [_reshape(row, C.m, C.n) for row in ident.data])
    ker = kernel(Mat.from_rows(C.field, [list(v) for v in C.flat.rows], mn))
    return RankCode(C.field, C.m, C.n,
                    SubspaceBasis.from_vectors(C.field, mn, [list(v) for v in ker.rows]))


def macwilliams_check(C: RankCode, *, budget: int = DEFAULT_CODEWORD_BUDGET) -> bool:
    """Verify the rank-metric MacWilliams identities for nu = 0..m exactly.

    Both rank distributions are computed by independent brute force; the
    identity is checked in integer arithmetic after clearing the q^{n nu}
    denominator.
    """
    A = C.rank_distribution(budget=budget).A
    B = delsarte_dual_code(C).rank_distribution(budget=budget).A
    q, m, n = C.q, C.m, C.n
    size = q**C.dim
    for nu in range(m + 1):
        lhs = sum(A[i] * qbinom(m - i, nu, q)
                  for i in range(0, min(m - nu, len(A) - 1) + 1))
        rhs = size * sum(B[j] * qbinom(m - j, nu - j, q)
                         for j in range(0, min(nu, len(B) - 1) + 1))
        if lhs * q ** (n * nu) != rhs:
            return False
    return True


def dual_relations_check(C: RankCode, *, budget: int = DEFAULT_CODEWORD_BUDGET) -> bool:
    """Verify the MRD dual relations for nu = 0..m'-d (exact integers)."""
    if not C.is_mrd(budget=budget):
        raise NotMRD("dual relations hold for MRD codes only")
    A = C.rank_distribution(budget=budget).A
    q = C.q
    mp, np_ = min(C.m, C.n), max(C.m, C.n)
    d = C.min_distance(budget=budget)
    for nu in range(mp - d + 1):
        lhs = qbinom(mp, nu, q) + sum(
            A[i] * qbinom(mp - i, nu, q) for i in range(d, mp - nu + 1))
        rhs = q ** (C.dim - np_ * nu) * qbinom(mp, nu, q)
        if lhs != rhs:
            return False
    return True


# -- idealisers ----------------------------------------------------------------


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass
class Idealiser:
    """A one-sided idealiser subalgebra with its order and field flag.

    degree is the matrix size (m for left, n for right); the field check is
    exhaustive for orders up to 2^16 and seeded-sampled above that, with the
    mode recorded in field_check_exhaustive.
    """

    side: Side
    degree: int
    basis: list[tuple[tuple[int, ...], ...]]
    dim: int
    order: int
    is_field: bool
    field_check_exhaustive: bool


def _coset_reduce(flat: SubspaceBasis, vec: list[int]) -> list[int]:
    """Canonical coset representative of vec modulo the row space of flat."""
    F = flat.field
    sub, mul = F.sub, F.mul
    for row, p in zip(flat.rows, flat.pivots):
        f = vec[p]
        if f:
            vec = [sub(x, mul(f, y)) for x, y in zip(vec, row)]
    return vec


def _idealiser(C: RankCode, side: Side) -> Idealiser:
    F = C.field
    s = C.m if side is Side.LEFT else C.n
    basis_mats = C.basis_matrices()
    constraints: list[list[int]] = [[] for _ in range(len(basis_mats) * C.m * C.n)]
    for a in range(s):
        for b in range(s):
            col: list[int] = []
            for M in basis_mats:
                if side is Side.LEFT:
                    # rows of E_ab M: row a = row b of M
                    prod = [[0] * C.n for _ in range(C.m)]
                    prod[a] = list(M[b])
                else:
                    # columns of M E_ab: column b = column a of M
                    prod = [[0] * C.n for _ in range(C.m)]
                    for i in range(C.m):
                        prod[i][b] = M[i][a]
                col.extend(_coset_reduce(C.flat, _flatten_mat(prod)))
            for rix, v in enumerate(col):
                constraints[rix].append(v)
    ker = kernel(Mat.from_rows(F, constraints, s * s))
    basis = [_reshape(v, s, s) for v in ker.rows]
    dim = len(basis)
    order = F.order**dim
    is_field, exhaustive = _field_flag(F, basis, s, order)
    ide = Idealiser(side, s, basis, dim, order, is_field, exhaustive)
    _verify_idealiser_closure(C, ide)
    return ide


def _field_flag(F: Field, basis, s: int, order: int) -> tuple[bool, bool]:
    """Every nonzero element invertible: exhaustive up to the check limit,
    otherwise a seeded sample flagged as non-exhaustive."""
    if not basis:
        return False, True
    if order <= FIELD_CHECK_LIMIT:
        from .fqlinalg import iter_span_packed, iter_span_rows
        if F.order == 2:
            packed = [_pack_bits(_flatten_mat(M)) for M in basis]
            words = iter_span_packed(packed, include_zero=False)
            for w in words:
                rows = [(w >> (i * s)) & ((1 << s) - 1) for i in range(s)]
                if _rank_bits(rows) != s:
                    return False, True
        else:
            flat = [_flatten_mat(M) for M in basis]
            for v in iter_span_rows(flat, F, include_zero=False):
                if _rank_rows(_reshape(v, s, s), F) != s:
                    return False, True
        return True, True
    rng = random.Random(0xC0DE)
    for _ in range(FIELD_CHECK_SAMPLES):
        coeffs = [rng.randrange(F.order) for _ in basis]
        if not any(coeffs):
            coeffs[0] = 1
        acc = [[0] * s for _ in range(s)]
        for c, M in zip(coeffs, basis):
            if c:
                for i in range(s):
                    row = acc[i]
                    for j in range(s):
                        if M[i][j]:
                            row[j] = F.add(row[j], F.mul(c, M[i][j]))
        if _rank_rows(acc, F) != s:
            return False, False
    return True, False


def _verify_idealiser_closure(C: RankCode, ide: Idealiser) -> None:
    for Y in ide.basis:
        Ymat = Mat.from_rows(C.field, [list(r) for r in Y], ide.degree)
        for M in C.basis_matrices():
            Mmat = Mat.from_rows(C.field, [list(r) for r in M], C.n)
            prod = mat_mul(Ymat, Mmat) if ide.side is Side.LEFT else mat_mul(Mmat, Ymat)
            if not C.contains(prod.data):
                raise InvalidParams("idealiser closure verification failed")


def left_idealiser(C: RankCode) -> Idealiser:
    """L(C) = {Y : YM ∈ C for all M ∈ C}, an F_q-algebra of m x m matrices."""
    return _idealiser(C, Side.LEFT)


def right_idealiser(C: RankCode) -> Idealiser:
    """R(C) = {Z : MZ ∈ C for all M ∈ C}, an F_q-algebra of n x n matrices."""
    return _idealiser(C, Side.RIGHT)


# -- puncturing, certificates ---------------------------------------------------


def puncture(C: RankCode, A: Mat) -> RankCode:
    """The punctured code A·C = {AM : M ∈ C} for full-row-rank A."""
    if C.m != C.n:
        raise ShapeMismatch("puncturing is defined for square codes")
    if A.cols != C.n:
        raise ShapeMismatch("A must have n columns")
    if rref(A)[1] != A.rows:
        raise RankDeficientA("A must have full row rank")
    gens = []
    for M in C.basis_matrices():
        Mmat = Mat.from_rows(C.field, [list(r) for r in M], C.n)
        gens.append(mat_mul(A, Mmat).data)
    return RankCode.from_generators(C.field, A.rows, C.n, gens)


class CertStatus(enum.Enum):
    CERTIFIED_INEQUIVALENT = "certified-inequivalent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EquivalenceCertificate:
    status: CertStatus
    reason: str | None = None


def inequivalence_certificate(C1: RankCode, C2: RankCode, *,
                              budget: int = DEFAULT_CODEWORD_BUDGET
                              ) -> EquivalenceCertificate:
    """Certify inequivalence from invariants (never asserts equivalence).

    Compares rank distributions, then idealiser orders and field flags; all
    are invariant under the rank-metric equivalence group.
    """
    if C1.params != C2.params:
        raise ParamMismatch("codes must share (m, n, q)")
    if C1.rank_distribution(budget=budget).A != C2.rank_distribution(budget=budget).A:
        return EquivalenceCertificate(CertStatus.CERTIFIED_INEQUIVALENT,
                                      "rank-distribution")
    for name, fn in (("left-idealiser", left_idealiser), ("right-idealiser", right_idealiser)):
        i1, i2 = fn(C1), fn(C2)
        if i1.order != i2.order:
            return EquivalenceCertificate(CertStatus.CERTIFIED_INEQUIVALENT,
                                          f"{name}-order")
        if i1.is_field != i2.is_field:
            return EquivalenceCertificate(CertStatus.CERTIFIED_INEQUIVALENT,
                                          f"{name}-structure")
    return EquivalenceCertificate(CertStatus.INCONCLUSIVE)


class GabidulinExclusion(enum.Enum):
    CERTIFIED_NEW = "certified-new"
    NOT_APPLICABLE = "not-applicable"


def gabidulin_family_exclusion(C: RankCode, r: int, n: int, h: int, *,
                               budget: int = DEFAULT_CODEWORD_BUDGET,
                               right_idealiser_order: int | None = None,
                               min_distance: int | None = None) -> GabidulinExclusion:
    """Certify that C is not a punctured generalized (twisted) Gabidulin code.

    Certification fires exactly when (h+1) does not divide r and the right
    idealiser has the maximum order q^n: punctured Gabidulin-family codes of
    these parameters have idealiser order q^l with l dividing rn/(h+1), and
    idealiser orders are equivalence invariants.  The keyword overrides let
    unit tests inject the invariants without building a full-size code.
    """
    if r * n % (h + 1) != 0:
        raise ParamMismatch("(h+1) must divide rn")
    if (C.m, C.n) != (r * n // (h + 1), n):
        raise ParamMismatch(
            f"expected shape ({r * n // (h + 1)}, {n}), got ({C.m}, {C.n})")
    d = min_distance if min_distance is not None else C.min_distance(budget=budget)
    if d != n - h:
        raise ParamMismatch(f"expected minimum distance {n - h}, got {d}")
    if n < h + 3 or (n, h) == (4, 1):
        raise HypothesisViolated(
            "inequivalence theorem needs n >= h+3 and (n,h) != (4,1)")
    if r % (h + 1) == 0:
        return GabidulinExclusion.NOT_APPLICABLE
    order = (right_idealiser_order if right_idealiser_order is not None
             else right_idealiser(C).order)
    if order == C.q**n:
        return GabidulinExclusion.CERTIFIED_NEW
    return GabidulinExclusion.NOT_APPLICABLE

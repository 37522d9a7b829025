"""Linear sets L_U in PG(r-1, q^n): point and hyperplane weights, the
hyperplane spectrum of maximum h-scattered linear sets, and the Hamming-metric
codes obtained by reading a linear set as a projective system.

Projective points are normalized so the first nonzero coordinate is 1, and
generator-matrix columns are sorted by code tuple; different normalizations
give diagonally equivalent codes, so one canonical choice is fixed.  Two
weight-enumerator conventions coexist: "projective" counts hyperplanes (the
same convention as hyperplane_spectrum) and "codeword" counts codewords, a factor
q^n - 1 apart.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    InvalidParams,
    NonIntegral,
    NotMaxScattered,
    NotSpanning,
)
from .fields import Field
from .fqlinalg import (
    DEFAULT_SUBSPACE_BUDGET,
    Mat,
    SubspaceBasis,
    intersection_dim,
    iter_span_rows,
    kernel,
    projective_points,
    qbinom,
    theta,
)
from .subspaces import (
    FqSubspace,
    fqn_subspace_flat,
    hyperplane_weight_iter,
    is_h_scattered,
)

DEFAULT_VECTOR_BUDGET = 1 << 20


def normalize_point(F: Field, v) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1 (canonical representative)."""
    for c in v:
        if c:
            if c == 1:
                return tuple(v)
            s = F.inv(c)
            return tuple(F.mul(s, x) for x in v)
    raise InvalidParams("the zero vector spans no point")


@dataclass
class LinearSet:
    """The point set of U with weights: w(P) = dim_{F_q}(U ∩ P-line)."""

    U: FqSubspace
    points: dict[tuple[int, ...], int]

    @property
    def rank(self) -> int:
        return self.U.k

    @property
    def size(self) -> int:
        return len(self.points)


def linear_set(U: FqSubspace, *, budget: int = DEFAULT_VECTOR_BUDGET) -> LinearSet:
    """Enumerate the q^k vectors of U and bucket them by projective point.

    A point collecting c nonzero vectors has weight w with q^w - 1 = c; the
    partition identity sum_P (q^{w(P)} - 1) = q^k - 1 is verified on the way.
    """
    tower = U.tower
    q = tower.base.order
    if q**U.k > budget:
        raise BudgetExceeded(q**U.k, budget, "subspace vectors")
    counts: dict[tuple[int, ...], int] = {}
    if U.k:
        for v in iter_span_rows([tuple(b) for b in U.basis_mid], tower.mid,
                                include_zero=False, coeff_field=tower.base):
            p = normalize_point(tower.mid, v)
            counts[p] = counts.get(p, 0) + 1
    points: dict[tuple[int, ...], int] = {}
    total = 0
    for p, c in counts.items():
        w = 0
        x = c + 1
        while x > 1:
            if x % q:
                raise InvalidParams("point fiber size is not q^w - 1")  # unreachable
            x //= q
            w += 1
        points[p] = w
        total += c
    if total != q**U.k - 1:
        raise InvalidParams("point partition identity failed")  # unreachable
    return LinearSet(U, points)


def point_weight(U: FqSubspace, P, *, budget: int = DEFAULT_SUBSPACE_BUDGET) -> int:
    """dim_{F_q}(U ∩ <P>_{F_{q^n}})."""
    tower = U.tower
    line = fqn_subspace_flat(
        tower, SubspaceBasis.from_vectors(tower.mid, U.r, [list(P)]))
    return intersection_dim(U.flat, line.flat)


def hyperplane_weight(U: FqSubspace, W) -> int:
    """dim_{F_q}(U ∩ H) for the hyperplane H with dual point W."""
    tower = U.tower
    H = kernel(Mat.from_rows(tower.mid, [list(W)], U.r))
    flat = fqn_subspace_flat(tower, H)
    return intersection_dim(U.flat, flat.flat)


def ti_formula(r: int, n: int, h: int, q: int, i: int) -> int:
    """Number of hyperplanes of weight rn/(h+1) - n + i in a maximum
    h-scattered linear set; exact big-integer evaluation with the division
    by q^n - 1 asserted to be exact."""
    if not 0 <= i <= h:
        raise InvalidParams(f"i must lie in 0..h, got {i}")
    if (r * n) % (h + 1) != 0:
        raise InvalidParams("(h+1) must divide rn")
    s = 0
    for j in range(h - i + 1):
        term = (qbinom(n - i, j, q) * q ** (j * (j - 1) // 2)
                * (q ** (r * n * (h - i - j + 1) // (h + 1)) - 1))
        s += -term if j % 2 else term
    num = qbinom(n, i, q) * s
    if num % (q**n - 1):
        raise NonIntegral(f"t_{i} is not integral; formula misuse")
    return num // (q**n - 1)


def hyperplane_spectrum(U: FqSubspace, h: int | None = None, *,
                        budget: int = DEFAULT_SUBSPACE_BUDGET) -> dict[int, int]:
    """Brute-force hyperplane weight spectrum {i: count} of a maximum
    h-scattered U, with weight rn/(h+1) - n + i.

    Pure enumeration: the counts are produced independently of ti_formula so
    the two can be compared as an oracle check.
    """
    r, n, k = U.r, U.tower.n, U.k
    if h is None:
        if k == 0 or (r * n) % k != 0 or (r * n) // k < 2:
            raise NotMaxScattered(f"k={k} is not rn/(h+1) for any h >= 1")
        h = (r * n) // k - 1
    if k * (h + 1) != r * n:
        raise NotMaxScattered(f"k={k} != rn/(h+1) = {r * n}/{h + 1}")
    if not 1 <= h <= r - 1:
        raise NotMaxScattered(f"no admissible h: inferred h={h} outside 1..r-1")
    if not is_h_scattered(U, h, budget=budget):
        raise NotMaxScattered("U is not h-scattered")
    lo = k - n
    spectrum: dict[int, int] = {}
    for _, wt in hyperplane_weight_iter(U, budget=budget):
        i = wt - lo
        if not 0 <= i <= h:
            raise InvalidParams("hyperplane weight escaped the window")  # unreachable
        spectrum[i] = spectrum.get(i, 0) + 1
    return dict(sorted(spectrum.items()))


# -- Hamming codes from projective systems -------------------------------------


@dataclass
class HammingCode:
    """A linear [N, k] code over F_{q^n} given by a full-rank generator
    matrix with no zero columns (a projective-system generator)."""

    field: Field
    k: int
    N: int
    gen: tuple[tuple[int, ...], ...]
    d: int | None = None

    def __post_init__(self):
        if len(self.gen) != self.k or any(len(r) != self.N for r in self.gen):
            raise InvalidParams("generator shape mismatch")
        for j in range(self.N):
            if all(row[j] == 0 for row in self.gen):
                raise InvalidParams("projective systems forbid zero columns")


def projective_system_code(L: LinearSet, *,
                           budget: int = DEFAULT_SUBSPACE_BUDGET) -> HammingCode:
    """The [N, r] code over F_{q^n} whose columns are the points of L_U.

    N = |L_U| and the minimum distance is N - max_H |L ∩ H| over hyperplanes,
    computed here by scanning hyperplanes through their dual points.
    """
    U = L.U
    tower, r = U.tower, U.r
    if not U.spans_ambient():
        raise NotSpanning("the linear set spans no frame; not a projective system")
    mid = tower.mid
    cols = sorted(L.points)
    N = len(cols)
    gen = tuple(tuple(col[i] for col in cols) for i in range(r))
    add, mul = mid.add, mid.mul
    max_cut = 0
    for w in projective_points(mid, r, budget=budget):
        cut = 0
        for col in cols:
            s = 0
            for x, y in zip(w, col):
                if x and y:
                    s = add(s, mul(x, y))
            if s == 0:
                cut += 1
        if cut > max_cut:
            max_cut = cut
    return HammingCode(mid, r, N, gen, d=N - max_cut)


def weight_enumerator(C: HammingCode, convention: str = "projective", *,
                      budget: int = DEFAULT_VECTOR_BUDGET) -> dict[int, int]:
    """Weight -> coefficient map by brute force over all q^{nk} codewords.

    "codeword" counts nonzero codewords; "projective" divides each count by
    q^n - 1 (the hyperplane-counting convention), asserting
    exactness.
    """
    if convention not in ("projective", "codeword"):
        raise InvalidParams(f"unknown convention {convention!r}")
    F = C.field
    size = F.order**C.k
    if size > budget:
        raise BudgetExceeded(size, budget, "codewords")
    counts: dict[int, int] = {}
    for cw in iter_span_rows(list(C.gen), F, include_zero=False):
        w = sum(1 for x in cw if x)
        counts[w] = counts.get(w, 0) + 1
    if convention == "codeword":
        return dict(sorted(counts.items()))
    out = {}
    for w, c in counts.items():
        if c % (F.order - 1):
            raise NonIntegral("codeword count is not a multiple of q^n - 1")
        out[w] = c // (F.order - 1)
    return dict(sorted(out.items()))


def expected_weights(r: int, n: int, h: int, q: int) -> dict[int, int]:
    """Closed-form projective weight enumerator of the code of a maximum
    h-scattered linear set: weight w_i = theta_{k-1} - theta_{k-n+i-1} has
    coefficient t_i, for i = 0..h (thetas over q, k = rn/(h+1))."""
    k = r * n // (h + 1)
    out = {}
    for i in range(h + 1):
        w = theta(k - 1, q) - theta(k - n + i - 1, q)
        out[w] = out.get(w, 0) + ti_formula(r, n, h, q, i)
    return dict(sorted(out.items()))


def qsystem_code(U: FqSubspace, h: int | None = None, *,
                 budget: int = DEFAULT_SUBSPACE_BUDGET,
                 vector_budget: int = DEFAULT_VECTOR_BUDGET) -> HammingCode:
    """The length-rn/(h+1) code whose generator columns are an F_q-basis of a
    maximum h-scattered U; a column-deletion (up to column scalars) of the
    projective-system code."""
    r, n, k = U.r, U.tower.n, U.k
    if h is None:
        if k == 0 or (r * n) % k != 0 or (r * n) // k < 2:
            raise NotMaxScattered(f"k={k} is not rn/(h+1) for any h >= 1")
        h = (r * n) // k - 1
    if k * (h + 1) != r * n:
        raise NotMaxScattered(f"k={k} != rn/(h+1)")
    if not 1 <= h <= r - 1:
        raise NotMaxScattered(f"no admissible h: inferred h={h} outside 1..r-1")
    if n < h + 3:
        raise InvalidParams("the q-system reading needs n >= h+3")
    if not is_h_scattered(U, h, budget=budget):
        raise NotMaxScattered("U is not h-scattered")
    gen = tuple(tuple(v[i] for v in U.basis_mid) for i in range(r))
    code = HammingCode(U.tower.mid, r, k, gen)
    enum = weight_enumerator(code, "codeword", budget=vector_budget)
    code.d = min(enum)
    return code

"""Exact linear algebra: RREF, kernels, intersections, counting, enumeration."""

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from ranklab.errors import BudgetExceeded
from ranklab.fields import Field, make_tower
from ranklab.fqlinalg import (
    Mat,
    SubspaceBasis,
    enumerate_subspaces,
    intersect,
    intersection_dim,
    iter_span_packed,
    iter_span_rows,
    kernel,
    mat_inverse,
    mat_mul,
    projective_points,
    qbinom,
    rref,
    theta,
)

F2 = Field(2)


def test_rref_identity_and_zero():
    I3 = Mat.identity(F2, 3)
    R, rank = rref(I3)
    assert R.data == I3.data and rank == 3
    Z = Mat.zero(F2, 2, 3)
    R, rank = rref(Z)
    assert R.data == Z.data and rank == 0


def test_rref_duplicate_rows():
    R, rank = rref(Mat.from_rows(F2, [[1, 1], [1, 1]]))
    assert R.data == [[1, 1], [0, 0]] and rank == 1


def test_rref_normalizes_pivots_over_f3():
    F3 = Field(3)
    R, rank = rref(Mat.from_rows(F3, [[2, 1], [1, 1]]))  # det = 1
    assert rank == 2 and R.data == [[1, 0], [0, 1]]
    R, rank = rref(Mat.from_rows(F3, [[2, 1], [1, 2]]))  # det = 3 = 0
    assert rank == 1 and R.data == [[1, 2], [0, 0]]


def test_kernel_identity_and_zero():
    assert kernel(Mat.identity(F2, 3)).dim == 0
    assert kernel(Mat.zero(F2, 2, 3)).dim == 3


def test_kernel_matches_exhaustive_solution_set():
    M = Mat.from_rows(F2, [[1, 0, 1]])
    K = kernel(M)
    # oracle: solve over all 8 vectors
    sols = {v for v in itertools.product((0, 1), repeat=3)
            if (v[0] + v[2]) % 2 == 0}
    assert K.dim == 2 and (1, 0, 1) in sols
    assert {tuple(v) for v in iter_span_rows([list(r) for r in K.rows], F2)} == sols


def test_kernel_rref_exhaustive_small_f2():
    # every matrix over F_2 up to 3x4: kernel equals the brute-force solution set
    for rows, cols in ((1, 2), (2, 2), (2, 3), (3, 3), (3, 4)):
        for bits in range(2 ** (rows * cols)):
            data = [[(bits >> (r * cols + c)) & 1 for c in range(cols)]
                    for r in range(rows)]
            M = Mat.from_rows(F2, data, cols)
            K = kernel(M)
            sols = {v for v in itertools.product((0, 1), repeat=cols)
                    if all(sum(a * b for a, b in zip(row, v)) % 2 == 0
                           for row in data)}
            span = ({tuple(v) for v in iter_span_rows([list(r) for r in K.rows], F2)}
                    if K.dim else {(0,) * cols})
            assert span == sols


def test_intersect_self_and_complementary():
    A = SubspaceBasis.from_vectors(F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    B = SubspaceBasis.from_vectors(F2, 4, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert intersect(A, A) == A
    assert intersect(A, B).dim == 0


def test_intersect_matches_exhaustive_membership():
    rng = random.Random(5)
    for _ in range(25):
        A = SubspaceBasis.from_vectors(
            F2, 5, [[rng.randrange(2) for _ in range(5)] for _ in range(3)])
        B = SubspaceBasis.from_vectors(
            F2, 5, [[rng.randrange(2) for _ in range(5)] for _ in range(3)])
        got = intersect(A, B)
        av = set(iter_span_packed(A.packed_rows()))
        bv = set(iter_span_packed(B.packed_rows()))
        inter = av & bv
        assert {x for x in iter_span_packed(got.packed_rows())} == inter
        assert intersection_dim(A, B) == got.dim


def test_qbinom_values():
    assert qbinom(2, 1, 2) == 3
    assert qbinom(3, 5, 7) == 0
    assert qbinom(4, 2, 2) == 35
    assert qbinom(5, 0, 3) == 1
    assert qbinom(-1, 0, 2) == 0


def test_qbinom_counts_subspaces_exhaustively():
    # cross-check 35 against a from-scratch enumeration of 2-dim subspaces
    seen = set()
    vectors = list(itertools.product((0, 1), repeat=4))
    for v1 in vectors:
        for v2 in vectors:
            S = SubspaceBasis.from_vectors(F2, 4, [list(v1), list(v2)])
            if S.dim == 2:
                seen.add(S)
    assert len(seen) == qbinom(4, 2, 2) == 35


@pytest.mark.parametrize("q,make_field", [
    (2, lambda: Field(2)),
    (3, lambda: Field(3)),
    (4, lambda: make_tower(2, 1, 2, 1).mid),
])
def test_enumerate_subspaces_hits_qbinom(q, make_field):
    F = make_field()
    for m in range(1, 6):
        for d in range(0, m + 1):
            subs = list(enumerate_subspaces(m, d, F))
            assert len(subs) == qbinom(m, d, q)
            assert len(set(subs)) == len(subs)


def test_enumerate_subspaces_budget_gate():
    with pytest.raises(BudgetExceeded):
        list(enumerate_subspaces(10, 5, Field(2), budget=10))


def test_lines_of_pg_1_4():
    F4 = make_tower(2, 1, 2, 1).mid
    assert len(list(enumerate_subspaces(2, 1, F4))) == 5
    assert theta(1, 4) == 5


def test_projective_points_count_and_canonicality():
    F4 = make_tower(2, 1, 2, 1).mid
    pts = list(projective_points(F4, 3))
    assert len(pts) == theta(2, 4) == 21
    assert len(set(pts)) == 21
    for p in pts:
        lead = next(x for x in p if x)
        assert lead == 1


def test_dim_formula_randomized_1000_trials():
    rng = random.Random(17)
    for _ in range(1000):
        m = rng.randrange(2, 11)
        A = SubspaceBasis.from_vectors(
            F2, m, [[rng.randrange(2) for _ in range(m)]
                    for _ in range(rng.randrange(0, m + 1))])
        B = SubspaceBasis.from_vectors(
            F2, m, [[rng.randrange(2) for _ in range(m)]
                    for _ in range(rng.randrange(0, m + 1))])
        assert A.sum(B).dim + intersect(A, B).dim == A.dim + B.dim


@given(st.integers(2, 9), st.data())
def test_dim_formula_over_f3(m, data):
    F3 = Field(3)
    rows = st.lists(st.lists(st.integers(0, 2), min_size=m, max_size=m),
                    min_size=0, max_size=m)
    A = SubspaceBasis.from_vectors(F3, m, data.draw(rows))
    B = SubspaceBasis.from_vectors(F3, m, data.draw(rows))
    assert A.sum(B).dim + intersect(A, B).dim == A.dim + B.dim


def test_mat_inverse_round_trip():
    F16 = make_tower(2, 1, 4, 1).mid
    rng = random.Random(3)
    for _ in range(10):
        M = Mat.from_rows(F16, [[rng.randrange(16) for _ in range(3)]
                                for _ in range(3)])
        if rref(M)[1] < 3:
            continue
        assert mat_mul(M, mat_inverse(M)).data == Mat.identity(F16, 3).data


def test_iter_span_rows_f16_coefficients():
    # F_{16}-span of one row has 16 elements, not just integer multiples
    F16 = make_tower(2, 1, 4, 1).mid
    vals = set(iter_span_rows([(1, 3)], F16))
    assert len(vals) == 16
    assert (7, F16.mul(7, 3)) in vals

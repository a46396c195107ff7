"""Subspace engines: ranks, lattice operations, determinism."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PRIME, fraction_rank
from lcslab.freealg import FieldSpec
from lcslab.linalg import InclusionViolationError, Subspace, matmul_mod, quotient_dim, span  # noqa: F401


def dicts_of(matrix):
    return [
        {j: int(v) for j, v in enumerate(row) if v}
        for row in matrix
    ]


def test_span_empty(F, Q):
    for field in (F, Q):
        S = span([], 5, field)
        assert S.rank == 0
        assert S.contains([0, 0, 0, 0, 0])


def test_span_full(F):
    S = span(np.array([[1, 0], [1, 1]]), 2, F)
    assert S.rank == 2


def test_commutator_span_rank_one(F):
    # [x,y], [y,x], [x,x], [y,y] as vectors in the four words of degree 2
    vecs = np.array([[0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert span(vecs % F.p, 4, F).rank == 1


def test_contains(F, Q):
    for field in (F, Q):
        S = span([{0: 1}], 3, field)
        assert not S.contains({1: 1})
        assert S.contains({0: 5})


def test_length_mismatch(F):
    with pytest.raises(Exception):
        span(np.ones((1, 4), dtype=np.int64), 3, F)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 9), st.integers(2, 9))
def test_rank_matches_fraction_oracle(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.integers(-6, 7, (m, n))
    F = FieldSpec.prime(PRIME)
    Q = FieldSpec.rationals()
    expected = fraction_rank(A)
    assert span(A % PRIME, n, F).rank == expected
    assert span(dicts_of(A), n, Q).rank == expected


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_modularity(seed):
    rng = np.random.default_rng(seed)
    F = FieldSpec.prime(PRIME)
    S1 = span(rng.integers(0, PRIME, (4, 9)), 9, F)
    S2 = span(rng.integers(0, PRIME, (3, 9)), 9, F)
    assert S1.sum(S2).rank + S1.intersect(S2).rank == S1.rank + S2.rank


def test_modularity_exact(Q):
    rng = np.random.default_rng(11)
    S1 = span(dicts_of(rng.integers(-3, 4, (4, 8))), 8, Q)
    S2 = span(dicts_of(rng.integers(-3, 4, (3, 8))), 8, Q)
    assert S1.sum(S2).rank + S1.intersect(S2).rank == S1.rank + S2.rank


def test_intersection_contents(F, Q):
    for field in (F, Q):
        e = lambda i: {i: 1}
        S1 = span([e(0), {1: 1, 2: 1}], 4, field)
        S2 = span([e(1), {0: 1, 2: 1}], 4, field)
        inter = S1.intersect(S2)
        # both spaces contain e0+e1+e2
        assert inter.rank == 1
        assert inter.contains({0: 1, 1: 1, 2: 1})
        assert S1.intersect(S1) == S1
        assert span([e(0)], 4, field).intersect(span([e(1)], 4, field)).rank == 0


def test_quotient_dim(F):
    big = span(np.eye(4, dtype=np.int64), 4, F)
    small = span(np.eye(4, dtype=np.int64)[:2], 4, F)
    assert quotient_dim(big, small) == 2
    other = span([{3: 1}, {2: 1, 3: 2}], 4, F)
    with pytest.raises(InclusionViolationError):
        quotient_dim(other, span([{0: 1}], 4, F))


def test_span_is_canonical(F, Q):
    rng = np.random.default_rng(5)
    A = rng.integers(0, PRIME, (12, 7))
    S1 = span(A, 7, F)
    S2 = span(A[::-1].copy(), 7, F)
    assert S1 == S2
    assert np.array_equal(S1.rows_matrix(), S2.rows_matrix())
    B = rng.integers(-4, 5, (8, 6))
    E1 = span(dicts_of(B), 6, Q)
    E2 = span(dicts_of(B[::-1]), 6, Q)
    assert E1 == E2


def test_idempotent_span(F):
    rng = np.random.default_rng(9)
    S = span(rng.integers(0, PRIME, (5, 8)), 8, F)
    again = span(S.rows_matrix(), 8, F)
    assert again == S


def test_rank_agreement_across_primes_and_q(F, F2, Q):
    rng = np.random.default_rng(17)
    A = rng.integers(-9, 10, (20, 14))
    r_q = span(dicts_of(A), 14, Q).rank
    assert span(A % F.p, 14, F).rank == r_q
    assert span(A % F2.p, 14, F2).rank == r_q


def test_matmul_mod_int64_path_and_chunking():
    # prime above the float64 window forces the integer path
    p = (1 << 30) - 35
    rng = np.random.default_rng(3)
    A = rng.integers(0, p, (7, 40))
    B = rng.integers(0, p, (40, 5))
    got = matmul_mod(A, B, p)
    expected = (A.astype(object) @ B.astype(object)) % p
    assert np.array_equal(got.astype(object), expected)
    # small prime, inner dimension far beyond one chunk is still exact
    p2 = 94906249
    A2 = rng.integers(0, p2, (3, 2500))
    B2 = rng.integers(0, p2, (2500, 4))
    got2 = matmul_mod(A2, B2, p2)
    expected2 = (A2.astype(object) @ B2.astype(object)) % p2
    assert np.array_equal(got2.astype(np.int64).astype(object), expected2)


def test_defect_dim(F):
    S = span(np.eye(5, dtype=np.int64)[:3], 5, F)
    vecs = np.array([[1, 1, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 2, 0], [0, 0, 0, 0, 1]])
    assert S.defect_dim(vecs) == 2


def test_big_prime_subspace():
    p = (1 << 30) - 35
    F = FieldSpec.prime(p)
    rng = np.random.default_rng(1)
    A = rng.integers(-5, 6, (10, 8))
    assert span(A % p, 8, F).rank == fraction_rank(A)

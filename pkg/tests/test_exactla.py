import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicbraid.coeff import F2, F3, F4, F5, Z4J
from cubicbraid.exactla import (EchelonBasis, HowellBasis, check_snf_against_ranks, hermite_rows,
                                linear_action, rank_mod, smith_normal_form, snf_summary,
                                subspace_intersection, subspace_sum)


def _span_bruteforce(ring, rows, L):
    """All F-linear combinations (tiny cases only)."""
    out = {tuple([0] * L)}
    for r in rows:
        new = set()
        for v in out:
            for c in ring.elements():
                new.add(tuple(ring.add(a, ring.mul(c, b)) for a, b in zip(v, r)))
        out = new
    return out


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F2, F3, F4]), st.data())
def test_echelon_matches_bruteforce_span(ring, data):
    L = data.draw(st.integers(1, 5))
    rows = data.draw(st.lists(st.lists(st.integers(0, ring.size - 1), min_size=L, max_size=L), max_size=4))
    B = EchelonBasis(ring, L)
    for r in rows:
        B.insert(np.array(r))
    span = _span_bruteforce(ring, rows, L)
    assert ring.size ** B.rank == len(span)
    for v in itertools.islice(itertools.product(range(ring.size), repeat=L), 200):
        assert B.contains(np.array(v)) == (v in span)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([F2, F3, F4, F5]), st.data())
def test_zassenhaus(ring, data):
    L = data.draw(st.integers(2, 24))
    vec = st.lists(st.integers(0, ring.size - 1), min_size=L, max_size=L)
    common = data.draw(st.lists(vec, max_size=4))
    A, B = EchelonBasis(ring, L), EchelonBasis(ring, L)
    for S in (A, B):
        for v in common + data.draw(st.lists(vec, max_size=8)):
            S.insert(np.array(v))
    I = subspace_intersection(A, B)
    assert A.rank + B.rank == subspace_sum(A, B).rank + I.rank
    assert all(A.contains(r) and B.contains(r) for r in I.rows())


def test_closure_order_independence():
    rng = random.Random(3)
    L = 30
    perms = [np.array(rng.sample(range(L), L)) for _ in range(3)]
    acts = [linear_action(L, p) for p in perms]
    seed = np.zeros(L, dtype=np.int64)
    seed[[0, 5]] = [1, 2]
    ref = None
    for _ in range(5):
        B = EchelonBasis(F3, L)
        B.insert(seed)
        a = acts[:]
        rng.shuffle(a)
        B.close_under(a)
        if ref is None:
            ref = B
        assert B.rank == ref.rank and all(ref.contains(r) for r in B.rows())
    # the closure is invariant
    for p in perms:
        for r in ref.rows():
            out = np.zeros(L, dtype=np.int64)
            out[p] = r
            assert ref.contains(out)


def test_linear_action_with_coefficients():
    # x_i -> 2 x_{i+1} over F3, as a single-target action
    L = 4
    tgt = np.array([[1, -1], [2, -1], [3, -1], [0, -1]])
    coef = np.array([[2, 0]] * 4)
    B = EchelonBasis(F3, L)
    B.insert(np.array([1, 0, 0, 0]))
    B.close_under([linear_action(L, tgt, coef)])
    assert B.rank == 4


def test_howell_over_z4j():
    H = HowellBasis(Z4J, 3)
    two = np.stack([np.array([2, 0, 0]), np.zeros(3, dtype=np.int64)])
    H.insert(two)
    assert H.free_rank() is None  # 2 e1 spans a non-free module
    H.insert(np.stack([np.array([1, 1, 0]), np.zeros(3, dtype=np.int64)]))
    assert H.log_size() == 4 + 1 + 1 + 0 or H.log_size() > 0
    assert H.contains(np.stack([np.array([0, 2, 0]), np.zeros(3, dtype=np.int64)]))


def test_howell_free_rank():
    H = HowellBasis(Z4J, 4)
    H.insert(np.stack([np.array([1, 2, 0, 3]), np.array([0, 1, 0, 0])]))
    H.insert(np.stack([np.array([0, 0, 1, 1]), np.array([0, 0, 0, 1])]))
    assert H.free_rank() == 2
    assert H.log_size() == 8


def test_snf_known():
    assert smith_normal_form(np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]
    s = snf_summary([1, 2, 6, 18], 6)
    assert s["free_rank"] == 2 and s["torsion"] == {2: 1, 6: 1, 18: 1}
    assert s["primary"] == {2: 3, 3: 1, 9: 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_snf_cross_validation(r, c, data):
    M = np.array(data.draw(st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r,
                                    max_size=r)), dtype=np.int64)
    f = smith_normal_form(M)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
    assert all(check_snf_against_ranks(M, f).values())
    # the product of invariant factors is the gcd of maximal minors when square and full rank
    if r == c and round(abs(np.linalg.det(M))) != 0:
        assert np.prod([int(x) for x in f]) == round(abs(np.linalg.det(M)))


def test_hermite_rows_span():
    M = np.array([[2, 4], [3, 5]])
    H = hermite_rows(M)
    assert abs(int(round(np.linalg.det(H.astype(float))))) == 2


def test_rank_mod():
    M = np.array([[1, 1], [1, 1]])
    assert rank_mod(M, 2) == 1
    assert rank_mod(np.array([[2, 0], [0, 1]]), 4) == 3
    with pytest.raises(ValueError):
        rank_mod(M, 6)

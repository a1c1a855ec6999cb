import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicbraid.grouptable import (center, conjugacy_classes, enumerate_group, get_group, load, save,
                                   subgroup_closure, verify_group_facts)


@pytest.mark.parametrize("n,order", [(2, 3), (3, 24), (4, 648)])
def test_orders(n, order):
    assert enumerate_group(n).order == order


@pytest.mark.parametrize("n", [3, 4])
def test_table_invariants(n):
    T = get_group(n)
    N = T.order
    idx = np.arange(N)
    for g in range(T.ngens):
        L, R = T.left[g], T.right[g]
        # generators have order 3 as permutations
        assert np.array_equal(L[L[L]], idx) and np.array_equal(R[R[R]], idx)
        for h in range(T.ngens):
            assert np.array_equal(L[T.right[h]], T.right[h][L])
    assert np.array_equal(T.inv[T.inv], idx)
    assert all(T.mul(x, int(T.inv[x])) == 0 for x in range(N))


@pytest.mark.parametrize("n", [3, 4])
def test_relators_hold_everywhere(n):
    T = get_group(n)
    rels = [(i, i, i) for i in range(1, n)]
    rels += [(i, i + 1, i, -(i + 1), -i, -(i + 1)) for i in range(1, n - 1)]
    rels += [(i, k, -i, -k) for i in range(1, n) for k in range(i + 2, n)]
    for r in rels:
        assert T.eval(r) == 0


def test_word_witness():
    T = get_group(4)
    assert all(T.eval(T.word(x)) == x for x in range(T.order))


def test_z3_has_order_two_and_is_central():
    T = get_group(3)
    z = T.eval((1, 2) * 3)
    assert T.element_order(z) == 2
    assert sorted(center(T)) == sorted([0, z])


def test_class_counts():
    assert conjugacy_classes(get_group(3)).count == 7
    C = conjugacy_classes(get_group(4))
    assert C.count == 24
    assert C.size(int(C.class_of[0])) == 1
    assert sum(C.size(k) for k in range(C.count)) == 648


def test_subgroup_closure():
    T = get_group(3)
    Q = subgroup_closure(T, [T.eval((1, -2)), T.eval((-2, 1))])
    assert len(Q) == 8
    assert len(subgroup_closure(T, [T.eval((1,))])) == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12))
def test_eval_matches_stepwise_product(w):
    T = get_group(4)
    x = 0
    for a in w:
        x = T.mul(x, T.eval((a,)))
    assert T.eval(tuple(w)) == x


def test_save_load_roundtrip(tmp_path):
    T = get_group(4)
    p = str(tmp_path / "g4.cgt")
    save(T, p)
    U = load(p)
    assert U.order == T.order
    assert all(np.array_equal(a, b) for a, b in zip(U.left, T.left))
    assert np.array_equal(U.inv, T.inv)


def test_corrupt_cache_is_rejected(tmp_path):
    T = get_group(3)
    p = str(tmp_path / "g3.cgt")
    save(T, p)
    data = bytearray(open(p, "rb").read())
    data[20] ^= 0xFF
    open(p, "wb").write(bytes(data))
    with pytest.raises(ValueError):
        load(p)
    open(p, "wb").write(bytes(data[:30]))
    with pytest.raises(ValueError):
        load(p)
    open(p, "wb").write(b"nope" + bytes(40))
    with pytest.raises(ValueError):
        load(p)


def test_gamma5_facts():
    T = get_group(5)
    assert T.order == 155520
    facts = verify_group_facts(T)
    assert all(facts.values()), facts


def test_verify_group_facts_needs_gamma5():
    with pytest.raises(ValueError):
        verify_group_facts(get_group(4))


def test_cache_dir_env(tmp_path, monkeypatch):
    from cubicbraid.grouptable import default_cache_dir

    monkeypatch.setenv("CUBICBRAID_CACHE", str(tmp_path))
    assert default_cache_dir() == str(tmp_path)
    assert os.path.isdir(default_cache_dir())

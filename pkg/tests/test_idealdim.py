import pytest

from cubicbraid.braidword import element_b, element_c, element_q
from cubicbraid.coeff import F2, F3, F4
from cubicbraid.grouptable import get_group
from cubicbraid.idealdim import (bmw_ideal_suite, element_vector, ideal_of, named_kn_dim, named_un_dim,
                                 quaternion_subgroup, radical_powers, zmodule_structure)


@pytest.mark.parametrize("ring", [F2, F3, F4])
def test_k3_dims(ring):
    r = named_kn_dim(3, ring)
    assert (r.ideal_dim, r.quotient_dim) == (3, 21)


@pytest.mark.parametrize("ring,quot", [(F2, 237), (F3, 249), (F4, 237)])
def test_k4_dims(ring, quot):
    r = named_kn_dim(4, ring)
    assert r.quotient_dim == quot and r.ideal_dim + r.quotient_dim == 648


def test_restricted_matches_full_closure():
    # the conjugation-fixed subspace route against the plain two-sided closure
    for ring in (F2, F3):
        assert named_kn_dim(4, ring, restricted=True).quotient_dim == named_kn_dim(4, ring).quotient_dim


def test_un_dims():
    assert named_un_dim(3).quotient_dim == 15
    assert named_un_dim(4).quotient_dim == 69


def test_q_ideal_contains_c_but_not_b():
    T = get_group(3)
    I = ideal_of(T, F2, [element_q()])
    assert I.rank == 3
    assert I.contains(element_vector(T, element_c(), F2))
    assert not I.contains(element_vector(T, element_b(), F2))


def test_radical_powers():
    r = radical_powers()
    assert r["kQ8"] == [7, 5, 3, 1, 0]
    assert r["kGamma3"] == [21, 15, 9, 3, 0]
    assert r["q_equals_J4"] and r["b_equals_J3"] and r["J_is_ideal"]


def test_quaternion_subgroup():
    T = get_group(3)
    Q = quaternion_subgroup(T)
    assert len(Q) == 8 and 0 in Q
    assert sorted(T.element_order(x) for x in Q).count(4) == 6


def test_bmw_n3():
    r = bmw_ideal_suite(3)
    assert r["quotient_B1"] == 15 and r["quotient_Bcap"] == 21
    assert r["Bcap_equals_q"] and r["one_plus_z3_in_Bplus"]


def test_bmw_n4_memberships():
    r = bmw_ideal_suite(4)
    assert r["quotient_B1"] == 105
    assert all(v for k, v in r.items() if isinstance(v, bool)), r


def test_zmodule_n3_is_free():
    r = zmodule_structure(3)
    assert r["free_rank"] == 21 and r["torsion"] == {}
    assert all(r["checks"].values())

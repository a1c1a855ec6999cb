import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicbraid.coeff import (F2, F3, F4, F5, F7, Z4, Z4J, ZJ, ZZ, PackedRow, Poly, ring_from_name, row_axpy,
                              row_permute)

PACKED = [F2, F3, F4, Z4, Z4J, F5, F7]


def _naive_mul_z4j(x, y):
    # (a + bj)(c + dj) with j^2 = -1 - j
    a, b, c, d = x % 4, x // 4, y % 4, y // 4
    re = (a * c - b * d) % 4
    im = (a * d + b * c - b * d) % 4
    return re + 4 * im


@pytest.mark.parametrize("ring", [F2, F3, F4, Z4, Z4J, F5, F7])
def test_ring_axioms_exhaustive(ring):
    els = ring.elements()
    assert len(els) == ring.size
    for x, y, z in itertools.product(els, repeat=3):
        assert ring.add(x, ring.add(y, z)) == ring.add(ring.add(x, y), z)
        assert ring.mul(x, ring.mul(y, z)) == ring.mul(ring.mul(x, y), z)
        assert ring.mul(x, ring.add(y, z)) == ring.add(ring.mul(x, y), ring.mul(x, z))
    for x in els:
        assert ring.add(x, ring.neg(x)) == ring.zero()
        if ring.is_unit(x):
            assert ring.mul(x, ring.inv(x)) == ring.one()


def test_z4j_matches_naive_formula():
    for x, y in itertools.product(range(16), repeat=2):
        assert Z4J.mul(x, y) == _naive_mul_z4j(x, y)


def test_f4_j_permutes_roots_cyclically():
    j = F4.j
    assert [F4.mul(j, x) for x in (1, j, F4.mul(j, j))] == [j, F4.mul(j, j), 1]
    assert F4.pow(j, 3) == 1
    assert F4.frobenius(j) == F4.mul(j, j)


def test_z4j_units():
    # a unit reduces to a nonzero element of F4
    units = [x for x in range(16) if Z4J.is_unit(x)]
    assert len(units) == 12
    assert Z4J.pow(Z4J.j, 3) == 1


def test_ring_from_name():
    assert ring_from_name("f4") is F4
    assert ring_from_name("Z4J") is Z4J
    with pytest.raises(ValueError):
        ring_from_name("q7")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PACKED), st.integers(1, 200), st.data())
def test_packed_axpy_matches_naive(ring, length, data):
    vals = st.integers(0, ring.size - 1)
    x = data.draw(st.lists(vals, min_size=length, max_size=length))
    y = data.draw(st.lists(vals, min_size=length, max_size=length))
    c = data.draw(vals)
    got = row_axpy(PackedRow.from_values(ring, x), PackedRow.from_values(ring, y), c).to_values()
    assert [int(v) for v in got] == [ring.add(a, ring.mul(c, b)) for a, b in zip(x, y)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PACKED), st.integers(1, 130), st.data())
def test_axpy_linear_in_scalar(ring, length, data):
    vals = st.integers(0, ring.size - 1)
    d = PackedRow.from_values(ring, data.draw(st.lists(vals, min_size=length, max_size=length)))
    s = PackedRow.from_values(ring, data.draw(st.lists(vals, min_size=length, max_size=length)))
    a, b = data.draw(vals), data.draw(vals)
    assert row_axpy(row_axpy(d, s, a), s, b) == row_axpy(d, s, ring.add(a, b))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PACKED), st.integers(1, 150), st.data())
def test_get_set_roundtrip(ring, length, data):
    vals = data.draw(st.lists(st.integers(0, ring.size - 1), min_size=length, max_size=length))
    row = PackedRow.zeros(ring, length)
    for i, v in enumerate(vals):
        row.set(i, v)
    assert [int(row.get(i)) for i in range(length)] == vals
    assert row == PackedRow.from_values(ring, vals)
    assert row.nonzero_count() == sum(1 for v in vals if v)


def test_row_permute_and_errors():
    r = PackedRow.from_values(F3, [0, 1, 2, 1])
    assert list(row_permute(r, [3, 2, 1, 0]).to_values()) == [1, 2, 1, 0]
    with pytest.raises(ValueError):
        row_permute(r, [0, 0, 1, 2])
    with pytest.raises(ValueError):
        row_axpy(r, PackedRow.from_values(F4, [0, 1, 2, 3]), 1)
    with pytest.raises(IndexError):
        r.get(4)


def test_integer_rows_do_not_overflow():
    big = 2 ** 80
    r = PackedRow.from_values(ZZ, [big, 1])
    s = row_axpy(r, r, big)
    assert int(s.get(0)) == big + big * big


def test_poly_cube_identity_over_zj():
    u, v = Poly.u(ZJ), Poly.v(ZJ)
    j = ZJ.j
    j2 = ZJ.mul(j, j)
    P = (u + v + 1) * (u + v * Poly.const(ZJ, j) + Poly.const(ZJ, j2)) * (u + v * Poly.const(ZJ, j2)
                                                                          + Poly.const(ZJ, j))
    U, V = Poly.u(ZZ), Poly.v(ZZ)
    assert P == (U ** 3 + V ** 3 - U * V * 3 + 1).change_ring(ZJ)


def test_cubic_mod4_and_substitution():
    U, V = Poly.u(ZZ), Poly.v(ZZ)
    a = (U ** 3 + V ** 3 - U * V * 3 + 1).change_ring(Z4J)
    b = (U ** 3 + V ** 3 + U * V + 1).change_ring(Z4J)
    assert a == b
    u = Poly.u(Z4J)
    for g in range(3):
        gam = Poly.const(Z4J, Z4J.pow(Z4J.j, g))
        v = -(gam * u + gam * gam)
        assert b.substitute_v(v).is_zero()
        # the other sign does not kill it
        assert not b.substitute_v(gam * u + gam * gam).is_zero()


def test_poly_printing():
    U, V = Poly.u(ZZ), Poly.v(ZZ)
    assert str(U * 3 + U * U * V * 15 - V * V) == "3u+15u²v−v²"
    assert str(Poly(ZZ)) == "0"
    assert str(Poly.const(ZZ, -1)) == "−1"


def test_poly_degree_and_coeff():
    U, V = Poly.u(ZZ), Poly.v(ZZ)
    P = U ** 2 * V * 4 - 7
    assert P.degree() == 3
    assert P.coeff(2, 1) == 4 and P.coeff(0, 0) == -7 and P.coeff(1, 1) == 0
    assert (P - P).is_zero()

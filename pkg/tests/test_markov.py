import random

import pytest

from cubicbraid.coeff import F4, ZZ, Poly
from cubicbraid.markov import (LEMMA_WORDS, TraceExpr, Unreduced, gamma4_class_solver, in_constraint_ideal,
                               mod4_trace, ring_a_normal_form, trace_eval, trace_mod4_prediction,
                               verify_lemma73_74, verify_mod4_trace, verify_q_annihilation)

U, V = Poly.u(ZZ), Poly.v(ZZ)
Z3 = (1, 2) * 3


@pytest.mark.parametrize("w,P,Q", [
    ((), Poly.const(ZZ, 1), Poly(ZZ)),
    ((1,), U, Poly(ZZ)),
    ((1, 1), V, Poly(ZZ)),
    ((-1,), V, Poly(ZZ)),
    ((1, 2), U * U, Poly(ZZ)),
    ((1, -2), U * V, Poly(ZZ)),
    (Z3, Poly(ZZ), Poly.const(ZZ, 1)),
    ((2, -3, 1, 2, -3, 1, 2, 1), -(U * U * V * 3) - V * V, -(U * 3)),
])
def test_known_values(w, P, Q):
    assert trace_eval(w) == TraceExpr(P, Q)


def test_traceexpr_arithmetic():
    a = TraceExpr(U, V)
    b = TraceExpr.t1(V * 2)
    assert a + b - b == a
    assert -(-a) == a
    assert a.times(U) == TraceExpr(U * U, U * V)
    assert TraceExpr.tz3().substituted() == -(Poly.const(ZZ, 1) + U * V * 6)
    assert str(TraceExpr.t1(Poly(ZZ))) == "0"


@pytest.mark.parametrize("w", [(1, 2, -1), (2, 1, 1, -3, 2), (1, 2, 3, -2, 1)])
def test_conjugation_invariance(w):
    t = trace_eval(w)
    for g in [(1,), (-2,), (3, 1)]:
        conj = g + w + tuple(-x for x in reversed(g))
        assert trace_eval(conj) == t


def test_lemma_word_relations():
    r = verify_lemma73_74()
    assert r["all_ok"]
    assert r["L3"] == "−1+3u³−5uv+3v³"
    assert all(r["derivations"].values())
    assert set(LEMMA_WORDS) >= {"x", "y", "a", "b"}
    assert r["memberships"] == {"u^3+v^3-3uv+1": True, "3u^3+3v^3-5uv-1": True,
                                "3u^3+3v^3-3uv+1": False}


def test_q_annihilation():
    r = verify_q_annihilation()
    assert r["q_ok"] and r["qs1_ok"] and r["qs1^2_ok"]


def test_ring_a_normal_form():
    gens = [Poly.const(ZZ, 16), (U * U + V) * 4, (V * V + U) * 4, U ** 3 * 3 + V ** 3 * 3 - U * V * 5 - 1]
    for g in gens:
        assert in_constraint_ideal(g)
        assert in_constraint_ideal(g * (U * 7 + V * V - 3))
    assert not in_constraint_ideal(Poly.const(ZZ, 8))
    assert not in_constraint_ideal(U * 4)
    assert in_constraint_ideal(U * 16 * V)
    # 4u = 4 * (u + v^2) - 4 v^2, and 4 v^2 = -4u
    assert ring_a_normal_form(V * V * 4) == ring_a_normal_form(-(U * 4))
    with pytest.raises(ValueError):
        ring_a_normal_form(Poly.u(F4))


def test_integral_trace_agrees_with_hecke_traces():
    # symbolic P t(1) + Q t(z3) evaluated at each mod 4 specialisation against
    # the trace computed directly in the Hecke algebra
    rng = random.Random(4)
    tz = mod4_trace(Z3, 4)
    checked = 0
    for _ in range(40):
        w = tuple(rng.choice((1, -1)) * rng.randint(1, 3) for _ in range(rng.randint(0, 8)))
        try:
            t = trace_eval(w)
        except Unreduced:
            continue
        direct = mod4_trace(w, 4)
        for g in range(3):
            assert trace_mod4_prediction(t, g, tz[g]) == direct[g], (w, g)
        checked += 1
    assert checked >= 30


@pytest.mark.parametrize("n", [3, 4])
def test_mod4_trace_properties(n):
    r = verify_mod4_trace(samples=25, n=n)
    assert r["ok"], r


def test_gamma4_class_solver():
    r = gamma4_class_solver()
    assert r["classes"] == 24 and r["ok"]


def test_mod4_trace_strand_limit():
    with pytest.raises(ValueError):
        mod4_trace((7,))

"""Two-sided ideals in group algebras k[Gamma_n] and the named quotients.

The workhorse is :func:`ideal_closure`: the generator rows are spun under
left and right multiplication by s_i and s_i^2, which act on coordinates as
permutations.  For Gamma_5 over F2 the ideal is instead obtained from an
explicit spanning set of coset indicator rows (see :func:`kn5_f2`).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels as K
from .braidword import (FormalElement, element_b, element_q, element_rw, phi, z_word)
from .coeff import F2, F3, F4, F5, F7, ZZ, RingSpec, ring_from_name
from .exactla import (EchelonBasis, check_snf_against_ranks, linear_action, smith_normal_form,
                      snf_summary, subspace_intersection, subspace_sum)
from .grouptable import GroupTable, get_group, subgroup_closure

__all__ = [
    "IdealJob",
    "IdealResult",
    "element_vector",
    "group_actions",
    "ideal_closure",
    "restricted_closure",
    "coset_rows",
    "conjugate_subgroups",
    "ideal_of",
    "named_kn_dim",
    "named_un_dim",
    "radical_powers",
    "bmw_ideal_suite",
    "zmodule_structure",
    "kn5_f2",
    "quaternion_subgroup",
]


@dataclass
class IdealJob:
    table: GroupTable
    ring: RingSpec
    generators: List[FormalElement]
    strategy: str = "closure"  # or "cosets"
    restricted: bool = False


@dataclass
class IdealResult:
    computation: str
    n: int
    ring: str
    ideal_dim: int
    quotient_dim: int
    wall_ms: float = 0.0
    mem_bytes: int = 0
    basis: Optional[EchelonBasis] = field(default=None, repr=False)

    def record(self) -> Dict[str, object]:
        return {"computation": self.computation, "n": self.n, "ring": self.ring,
                "ideal_dim": self.ideal_dim, "quotient_dim": self.quotient_dim,
                "wall_ms": round(self.wall_ms, 1), "mem_bytes": self.mem_bytes}


# ---------------------------------------------------------------------------
# rows and actions


def element_vector(T: GroupTable, e: FormalElement, ring: RingSpec,
                   index: Optional[np.ndarray] = None) -> np.ndarray:
    """Coefficient vector of e in k[Gamma_n] (optionally re-indexed by index)."""
    if e.n > T.n:
        raise ValueError(f"element on {e.n} strands does not live in Gamma_{T.n}")
    acc: Dict[int, object] = {}
    for w, c in e.terms.items():
        x = T.eval(w)
        c = c if e.ring == ring else ring.from_int(c)
        acc[x] = ring.add(acc[x], c) if x in acc else c
    L = T.order if index is None else int((index >= 0).sum())
    v = np.zeros(L, dtype=np.int64)
    for x, c in acc.items():
        pos = x if index is None else index[x]
        if pos < 0:
            raise ValueError("element has support outside the restricted subgroup")
        v[pos] = c
    return v


def group_actions(T: GroupTable) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Left and right multiplication by every s_i and s_i^2."""
    acts = []
    for g in range(T.ngens):
        acts.append(linear_action(T.order, T.left[g]))
        acts.append(linear_action(T.order, T.right[g]))
    return acts


def _basis(ring: RingSpec, L: int, cap: Optional[int] = None) -> EchelonBasis:
    return EchelonBasis(ring, L, capacity=cap if cap is not None else L)


def ideal_closure(job: IdealJob) -> IdealResult:
    """Ideal generated by the job's generators; see module docstring."""
    t0 = time.perf_counter()
    T, ring = job.table, job.ring
    if job.restricted:
        return restricted_closure(T, ring, job.generators)
    if job.strategy == "cosets":
        return _coset_strategy(T, ring, job.generators)
    B = _basis(ring, T.order)
    for g in job.generators:
        B.insert(element_vector(T, g, ring))
    B.close_under(group_actions(T))
    dt = (time.perf_counter() - t0) * 1000
    return IdealResult("ideal_closure", T.n, ring.name, B.rank, T.order - B.rank, dt,
                       int(B.B.nbytes), B)


def ideal_of(T: GroupTable, ring: RingSpec, gens: Sequence[FormalElement]) -> EchelonBasis:
    return ideal_closure(IdealJob(T, ring, list(gens))).basis


# ---------------------------------------------------------------------------
# the index-3 subgroup Gamma_n^0


def _restricted_index(T: GroupTable) -> Tuple[np.ndarray, np.ndarray]:
    ln = T.length_mod3()
    elems = np.nonzero(ln == 0)[0]
    pos = np.full(T.order, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    return elems, pos


def _restricted_generators(T: GroupTable) -> List[int]:
    """Schreier generators s_1^k s_i s_1^{-k-1} of Gamma_n^0."""
    gens = set()
    for k in range(3):
        for i in range(1, T.n):
            letters = (1,) * k + (i,) + (-1,) * (k + 1)
            x = T.eval(letters)
            if x != 0:
                gens.add(x)
    return sorted(gens)


def restricted_closure(T: GroupTable, ring: RingSpec, gens: Sequence[FormalElement]) -> IdealResult:
    """Closure inside k[Gamma_n^0], also under conjugation by s_1.

    Valid for generators supported in Gamma_n^0; the full ideal is then the
    direct sum of three translates, so the quotient dimension is three times
    the restricted one.
    """
    t0 = time.perf_counter()
    elems, pos = _restricted_index(T)
    L = len(elems)
    acts = []
    for g in _restricted_generators(T):
        acts.append(linear_action(L, pos[T.left_mul_perm(g)[elems]]))
        acts.append(linear_action(L, pos[T.right_mul_perm(g)[elems]]))
    conj = T.left[0][T.right[1]]  # x -> s_1 x s_1^2
    acts.append(linear_action(L, pos[conj[elems]]))
    B = _basis(ring, L)
    for g in gens:
        B.insert(element_vector(T, g, ring, pos))
    B.close_under(acts)
    dt = (time.perf_counter() - t0) * 1000
    return IdealResult("restricted_closure", T.n, ring.name, 3 * B.rank, 3 * (L - B.rank), dt,
                       int(B.B.nbytes), B)


# ---------------------------------------------------------------------------
# coset enumeration mode


def quaternion_subgroup(T: GroupTable) -> List[int]:
    """The elements of Q_8 (the support of q) as indices of T."""
    return sorted({T.eval(w) for w, _ in element_q(T.n).terms.items()})


def conjugate_subgroups(T: GroupTable, H: Sequence[int]) -> List[Tuple[int, ...]]:
    """All conjugates gHg^{-1}, found by closing under generator conjugation."""
    start = tuple(sorted(H))
    seen = {start}
    todo = [start]
    conj = [T.left[g][T.right[g ^ 1]] for g in range(0, T.ngens)]
    while todo:
        S = todo.pop()
        for c in conj:
            S2 = tuple(sorted(int(c[x]) for x in S))
            if S2 not in seen:
                seen.add(S2)
                todo.append(S2)
    return sorted(seen)


def coset_rows(T: GroupTable, H: Sequence[int], restricted: bool = False) -> np.ndarray:
    """Supports of all rows g1*(sum of H)*g2, as an int array (rows, |H|).

    g1 (sum H) g2 is the indicator of the right coset (g1 H g1^{-1}) g1 g2, so
    it is enough to list right cosets of every conjugate of H.  With
    restricted=True only cosets inside Gamma_n^0 are kept (H must lie in it),
    re-indexed to that subgroup.
    """
    conjs = conjugate_subgroups(T, H)
    elems, pos = _restricted_index(T)
    out = []
    for S in conjs:
        S = np.array(S, dtype=np.int64)
        seen = np.zeros(T.order, dtype=bool)
        targets = elems if restricted else range(T.order)
        for h in targets:
            if seen[h]:
                continue
            coset = _right_coset(T, S, int(h))
            seen[coset] = True
            out.append(np.sort(pos[coset] if restricted else coset))
    return np.array(out, dtype=np.int64)


def _right_coset(T: GroupTable, S: np.ndarray, h: int) -> np.ndarray:
    x = S.copy()
    for letter in T.word(h):
        x = T.right[T.gen_index(letter)][x]
    return x


def _coset_strategy(T: GroupTable, ring: RingSpec, gens) -> IdealResult:
    t0 = time.perf_counter()
    if len(gens) != 1 or element_vector(T, gens[0], ZZ).tolist() != element_vector(T, element_q(T.n), ZZ).tolist():
        raise ValueError("the coset strategy is implemented for the generator q only")
    rows = coset_rows(T, quaternion_subgroup(T))
    B = _basis(ring, T.order)
    one = np.zeros(T.order, dtype=np.int64)
    for r in rows:
        v = one.copy()
        v[r] = 1
        B.insert(v)
    dt = (time.perf_counter() - t0) * 1000
    return IdealResult("coset_enumeration", T.n, ring.name, B.rank, T.order - B.rank, dt, int(B.B.nbytes), B)


# ---------------------------------------------------------------------------
# named quotients


def named_kn_dim(n: int, ring: RingSpec, restricted: bool = False) -> IdealResult:
    """dim k[Gamma_n]/(q)."""
    if n == 5:
        if ring != F2:
            raise MemoryError("K_5 over rings other than F2 is an extended computation")
        return kn5_f2()
    T = get_group(n)
    res = ideal_closure(IdealJob(T, ring, [element_q(n)], restricted=restricted))
    res.computation = f"K{n}" + ("_restricted" if restricted else "")
    return res


def named_un_dim(n: int, ring: RingSpec = F4) -> IdealResult:
    """dim k[Gamma_n]/(b)."""
    T = get_group(n)
    res = ideal_closure(IdealJob(T, ring, [element_b(n)]))
    res.computation = f"U{n}"
    return res


def _group_algebra_product(M: np.ndarray, x: np.ndarray, y: np.ndarray, ring: RingSpec) -> np.ndarray:
    """x*y in k[G] using the multiplication table M (char 2 or prime fields)."""
    out = np.zeros(len(x), dtype=np.int64)
    for a in np.nonzero(x)[0]:
        for b in np.nonzero(y)[0]:
            t = M[a, b]
            out[t] = ring.add(int(out[t]), ring.mul(int(x[a]), int(y[b])))
    return out


def _power_dims(gen_rows: List[np.ndarray], M: np.ndarray, ring: RingSpec, L: int, top: int = 6):
    """Dimensions of J, J^2, ... where J is spanned by gen_rows."""
    J = _basis(ring, L)
    J.extend(gen_rows)
    Jrows = J.rows()
    powers = [J]
    cur = J
    for _ in range(top - 1):
        nxt = _basis(ring, L)
        for x in cur.rows():
            for y in Jrows:
                nxt.insert(_group_algebra_product(M, x, y, ring))
        powers.append(nxt)
        cur = nxt
        if nxt.rank == 0:
            break
    return powers


def radical_powers(ring: RingSpec = F2) -> Dict[str, object]:
    """Powers of the radicals of kQ_8 and k[Gamma_3] in characteristic 2."""
    T = get_group(3)
    M = T.mult_table()
    Q = quaternion_subgroup(T)
    # kQ_8 inside k[Gamma_3]: augmentation ideal spanned by g - 1 = g + 1
    aug = []
    for g in Q:
        if g != 0:
            v = np.zeros(T.order, dtype=np.int64)
            v[g] = 1
            v[0] = ring.add(v[0], ring.neg(1))
            aug.append(v)
    pq = _power_dims(aug, M, ring, T.order)
    dq = [p.rank for p in pq] + [0] * (5 - len(pq))
    # J(kQ) C_3: right translates by powers of s_1
    s1 = T.eval((1,))
    s = [0, s1, T.mul(s1, s1)]
    augC = []
    for v in aug:
        for c in s:
            w = np.zeros(T.order, dtype=np.int64)
            for a in np.nonzero(v)[0]:
                w[M[a, c]] = v[a]
            augC.append(w)
    pg = _power_dims(augC, M, ring, T.order)
    dg = [p.rank for p in pg] + [0] * (5 - len(pg))
    q_ideal = ideal_of(T, ring, [element_q(3)])
    b_ideal = ideal_of(T, ring, [element_b(3)])

    def same(A: EchelonBasis, B: EchelonBasis) -> bool:
        return A.rank == B.rank and all(B.contains(r) for r in A.rows())

    return {
        "kQ8": dq[:5],
        "kGamma3": dg[:5],
        "q_equals_J4": same(q_ideal, pg[3]) if len(pg) > 3 else False,
        "b_equals_J3": same(b_ideal, pg[2]) if len(pg) > 2 else False,
        "q_dim": q_ideal.rank,
        "b_dim": b_ideal.rank,
        "J_is_ideal": _is_two_sided(T, pg[0]),
    }


def _is_two_sided(T: GroupTable, B: EchelonBasis) -> bool:
    for r in B.rows():
        for act in group_actions(T):
            y = np.zeros_like(r)
            y[act[0][:, 0]] = r
            if not B.contains(y):
                return False
    return True


# ---------------------------------------------------------------------------
# BMW-type ideals


def bmw_generators(n: int) -> Dict[str, List[FormalElement]]:
    rp = element_rw(1, n).over(F4)
    rm = element_rw(-1, n).over(F4)
    return {
        "1": [rp, rm],
        "j": [phi(rp, F4), phi(rm, F4)],
        "j2": [phi(phi(rp, F4), F4), phi(phi(rm, F4), F4)],
    }


def bmw_ideal_suite(n: int) -> Dict[str, object]:
    """The BW relation ideal B_1, its twists, their sum and intersection."""
    if n not in (3, 4):
        raise ValueError("the BMW suite runs for n = 3, 4")
    T = get_group(n)
    ring = F4
    gens = bmw_generators(n)
    B1 = ideal_of(T, ring, gens["1"])
    Bj = ideal_of(T, ring, gens["j"])
    Bj2 = ideal_of(T, ring, gens["j2"])
    Bplus = subspace_sum(subspace_sum(B1, Bj), Bj2)
    Bcap = subspace_intersection(subspace_intersection(B1, Bj), Bj2)
    out: Dict[str, object] = {
        "n": n,
        "dim_rw_plus": ideal_of(T, ring, [gens["1"][0]]).rank,
        "dim_rw_minus": ideal_of(T, ring, [gens["1"][1]]).rank,
        "dim_B1": B1.rank,
        "dim_Bj": Bj.rank,
        "dim_Bj2": Bj2.rank,
        "quotient_B1": T.order - B1.rank,
        "dim_Bplus": Bplus.rank,
        "dim_Bcap": Bcap.rank,
        "quotient_Bcap": T.order - Bcap.rank,
    }
    z = element_vector(T, FormalElement.from_words(n, [(), z_word(3).letters]), ring)
    out["one_plus_z3_in_Bplus"] = Bplus.contains(z)
    q_ideal = ideal_of(T, ring, [element_q(n)])
    out["q_in_Bcap"] = Bcap.contains(element_vector(T, element_q(n), ring))
    out["Bcap_equals_q"] = Bcap.rank == q_ideal.rank and all(Bcap.contains(r) for r in q_ideal.rows())
    if n == 4:
        b = element_vector(T, element_b(n), ring)
        S1j = subspace_sum(B1, Bj)
        S1j2 = subspace_sum(B1, Bj2)
        Sjj2 = subspace_sum(Bj, Bj2)
        out["b_in_B1+Bj"] = S1j.contains(b)
        out["b_in_B1+Bj2"] = S1j2.contains(b)
        out["b_in_Bj+Bj2"] = Sjj2.contains(b)
        lhs = subspace_sum(B1, subspace_intersection(Bj, Bj2))
        rhs = subspace_intersection(S1j, S1j2)
        out["dim_B1+(Bj∩Bj2)"] = lhs.rank
        out["dim_(B1+Bj)∩(B1+Bj2)"] = rhs.rank
        # lhs sits inside rhs, so equal dimensions give equality
        out["modular_equality"] = lhs.rank == rhs.rank
        out["b_in_B1+(Bj∩Bj2)"] = lhs.contains(b)
        out["quotient_B1+Bj"] = T.order - S1j.rank
    return out


# ---------------------------------------------------------------------------
# integer structure


def zmodule_structure(n: int) -> Dict[str, object]:
    """Invariant factors of Z[Gamma_n]/(q), n = 3, 4."""
    if n not in (3, 4):
        raise ValueError("the Z-module structure is computed for n = 3, 4")
    t0 = time.perf_counter()
    T = get_group(n)
    supports = coset_rows(T, quaternion_subgroup(T))
    M = np.zeros((len(supports), T.order), dtype=np.int64)
    for i, s in enumerate(supports):
        M[i, s] = 1
    factors = smith_normal_form(M)
    summary = snf_summary(factors, T.order)
    summary["checks"] = check_snf_against_ranks(M, factors)
    summary["rows"] = int(len(supports))
    summary["wall_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    return summary


# ---------------------------------------------------------------------------
# F2 K_5


def kn5_f2(seed: int = 20240601, combos_extra: int = 64, mix: int = 48,
           max_rounds: int = 4, progress=None) -> IdealResult:
    """dim F2[Gamma_5]/(q) = 3 * (51840 - dim of (q) inside F2[Gamma_5^0]).

    Spanning set: the 583200 indicators of right cosets Q'h, Q' a conjugate
    of Q_8 and h in Gamma_5^0.  A random mixture of them is brought to
    reduced echelon form; every spanning row is then checked against it, and
    rows that fail are added before repeating.  The final rank is therefore
    exactly the rank of the spanning set.
    """
    t0 = time.perf_counter()
    T = get_group(5)
    sup = coset_rows(T, quaternion_subgroup(T), restricted=True)
    L = int((T.length_mod3() == 0).sum())
    W = (L + 63) // 64
    m = len(sup)
    rng = np.random.default_rng(seed)
    nrows = L + combos_extra
    M = np.zeros((nrows, W), dtype=np.uint64)
    _mix_rows(M, sup, rng.integers(0, m, size=(nrows, mix)))
    if progress:
        progress(f"mixed {nrows} rows from {m} coset indicators")
    extra: List[int] = []
    for rnd in range(max_rounds):
        if extra:
            Mx = np.zeros((len(extra), W), dtype=np.uint64)
            _mix_rows(Mx, sup, np.array(extra, dtype=np.int64)[:, None])
            M = np.concatenate([M[:rank], Mx])
        rank, piv = K.m4ri_rref(M, L)
        if progress:
            progress(f"round {rnd}: rank {rank}")
        pivot_of_col = np.full(L, -1, dtype=np.int64)
        pivot_of_col[piv] = np.arange(rank)
        fails = np.zeros(4096, dtype=np.int64)
        nf = K.f2_member_sparse(M[:rank], pivot_of_col, sup, fails, len(fails))
        if nf == 0:
            dt = (time.perf_counter() - t0) * 1000
            res = IdealResult("K5_F2", 5, "F2", 3 * rank, 3 * (L - rank), dt, int(M.nbytes))
            return res
        extra = [int(i) for i in fails[: min(nf, len(fails))]]
    raise RuntimeError("spanning rows still outside the computed span")


def _mix_rows(M: np.ndarray, sup: np.ndarray, picks: np.ndarray) -> None:
    _mix_kernel(M, sup, picks)


from numba import njit  # noqa: E402


@njit(cache=True)
def _mix_kernel(M, sup, picks):
    for r in range(picks.shape[0]):
        for t in range(picks.shape[1]):
            row = sup[picks[r, t]]
            for c in row:
                M[r, c >> 6] ^= np.uint64(1) << np.uint64(c & 63)

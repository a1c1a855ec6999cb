"""Exact linear algebra: echelon bases over small rings, Howell forms, SNF.

Field rows are handled by the compiled kernels in ``_kernels``; the
non-field rings Z/4, Z/9 and Z/4[j] (all chain rings with uniformizer p and
p^2 = 0) use a Howell-form basis written with numpy; integer lattices are
reduced with numpy int64 and escalate to Python integers when entries grow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels as K
from .coeff import F2, F3, F4, Z4, Z4J, ZZ, PackedRow, RingSpec

__all__ = [
    "EchelonBasis",
    "HowellBasis",
    "ChainRing",
    "Z9",
    "Added",
    "ReducedToZero",
    "subspace_sum",
    "subspace_intersection",
    "IntLattice",
    "smith_normal_form",
    "snf_summary",
    "rank_mod",
    "linear_action",
    "check_snf_against_ranks",
    "hermite_rows",
]


# ---------------------------------------------------------------------------
# insert outcomes


@dataclass(frozen=True)
class Added:
    pivot: int


@dataclass(frozen=True)
class _Zero:
    def __repr__(self) -> str:
        return "ReducedToZero"


ReducedToZero = _Zero()


def _values(ring: RingSpec, row) -> np.ndarray:
    if isinstance(row, PackedRow):
        if row.ring != ring:
            raise ValueError(f"ring mismatch: {row.ring.name} vs {ring.name}")
        return row.to_values()
    return np.asarray(row, dtype=np.int64)


def linear_action(length: int, targets: np.ndarray, coefs: Optional[np.ndarray] = None):
    """Pack a sparse action for the closure kernels.

    targets is int64[L] (a permutation) or int64[L, k] with -1 for missing
    entries; coefs (same shape, ring values) defaults to all ones.
    """
    t = np.asarray(targets, dtype=np.int64)
    if t.ndim == 1:
        t = t[:, None]
    if t.shape[0] != length:
        raise ValueError("action length mismatch")
    if t.shape[1] < 2:
        t = np.concatenate([t, np.full((length, 2 - t.shape[1]), -1, dtype=np.int64)], axis=1)
    if coefs is None:
        c = np.where(t >= 0, 1, 0).astype(np.uint8)
    else:
        c = np.asarray(coefs, dtype=np.uint8)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[1] < t.shape[1]:
            c = np.concatenate([c, np.zeros((length, t.shape[1] - c.shape[1]), dtype=np.uint8)], axis=1)
    return t, c


# ---------------------------------------------------------------------------
# field echelon bases


class EchelonBasis:
    """Incremental semi-echelon basis over F2, F3, F4, F5 or F7.

    Rows are stored in insertion order; each has a pivot column with entry 1
    and vanishes on the pivots of all earlier rows.
    """

    def __init__(self, ring: RingSpec, length: int, capacity: Optional[int] = None):
        if not ring.is_field:
            raise ValueError(f"{ring.name} is not a field; use HowellBasis")
        self.ring = ring
        self.length = int(length)
        self.packed = ring.tag in K.PACKED_CODES
        self.code = K.PACKED_CODES.get(ring.tag, ring.p)
        self.W = (self.length + 63) // 64
        self.P = 1 if ring.tag == "F2" else 2
        self.add, self.mul, self.neg, self.inv = K.field_tables(ring.tag, ring.p)
        cap = capacity if capacity is not None else min(self.length, 64)
        self._alloc(max(1, min(cap, self.length)))
        self.rank = 0
        self._pivset: Dict[int, int] = {}

    def _alloc(self, cap: int) -> None:
        if self.packed:
            B = np.zeros((cap, self.P, self.W), dtype=np.uint64)
        else:
            B = np.zeros((cap, self.length), dtype=np.uint8)
        piv = np.full(cap, -1, dtype=np.int64)
        if getattr(self, "B", None) is not None:
            B[: self.rank] = self.B[: self.rank]
            piv[: self.rank] = self.piv[: self.rank]
        self.B, self.piv = B, piv

    def _grow(self) -> None:
        self._alloc(min(self.length, max(2 * self.B.shape[0], 16)))

    # -- conversion -------------------------------------------------------
    def _encode(self, vals: np.ndarray):
        vals = np.asarray(vals)
        if vals.shape != (self.length,):
            raise ValueError(f"row length {vals.shape} != {self.length}")
        v = vals.astype(np.int64)
        if self.packed:
            return K.pk_pack(self.code, (v % (4 if self.ring.tag == "F4" else self.ring.size)).astype(np.uint8), self.W)
        return (v % self.ring.p).astype(np.uint8)

    def _decode(self, x) -> np.ndarray:
        if self.packed:
            return K.pk_unpack(self.code, x, self.length).astype(np.int64)
        return x.astype(np.int64)

    # -- core operations --------------------------------------------------
    def reduce(self, row) -> np.ndarray:
        """Remainder of row after reduction (values)."""
        x = self._encode(_values(self.ring, row))
        if self.packed:
            K.pk_reduce(self.code, self.B, self.piv, self.rank, x)
        else:
            K.dn_reduce(self.code, self.B, self.piv, self.rank, x)
        return self._decode(x)

    def insert(self, row):
        """Insert a row; returns Added(pivot) or ReducedToZero."""
        x = self._encode(_values(self.ring, row))
        if self.rank >= self.B.shape[0]:
            if self.rank >= self.length:
                return ReducedToZero
            self._grow()
        if self.packed:
            c = K.pk_insert(self.code, self.B, self.piv, self.rank, x)
        else:
            c = K.dn_insert(self.code, self.B, self.piv, self.rank, x)
        if c < 0:
            return ReducedToZero
        self._pivset[int(c)] = self.rank
        self.rank += 1
        return Added(int(c))

    def extend(self, rows: Iterable) -> int:
        before = self.rank
        for r in rows:
            self.insert(r)
        return self.rank - before

    def contains(self, row) -> bool:
        return not self.reduce(row).any()

    membership = contains

    def rows(self) -> List[np.ndarray]:
        return [self._decode(self.B[i]) for i in range(self.rank)]

    def row(self, i: int) -> np.ndarray:
        return self._decode(self.B[i])

    def pivots(self) -> List[int]:
        return [int(c) for c in self.piv[: self.rank]]

    def copy(self) -> "EchelonBasis":
        out = EchelonBasis(self.ring, self.length, capacity=max(1, self.B.shape[0]))
        out.B[: self.rank] = self.B[: self.rank]
        out.piv[: self.rank] = self.piv[: self.rank]
        out.rank = self.rank
        out._pivset = dict(self._pivset)
        return out

    def close_under(self, actions: Sequence[Tuple[np.ndarray, np.ndarray]], start: int = 0) -> int:
        """Spin the span under the given sparse actions (see linear_action).

        Returns the final rank.  All rows from ``start`` on are pushed through
        every action; rows found along the way are processed too.
        """
        if not actions:
            return self.rank
        tgts = np.stack([a[0] for a in actions]).astype(np.int64)
        coefs = np.stack([a[1] for a in actions]).astype(np.uint8)
        if tgts.shape[1] != self.length:
            raise ValueError("action length mismatch")
        while True:
            if self.packed:
                res = K.pk_closure(self.code, self.B, self.piv, self.rank, tgts, coefs,
                                   self.add, self.mul, self.length, start)
            else:
                res = K.dn_closure(self.code, self.B, self.piv, self.rank, tgts, coefs,
                                   self.add, self.mul, start)
            if res >= 0:
                newrank = int(res)
                done = True
            else:
                newrank = -int(res) - 1
                done = False
            self.rank = newrank
            if done:
                break
            # out of room: grow and resume from the first row not yet spun
            start = self._restart_point(start)
            self._grow()
        self._pivset = {int(c): i for i, c in enumerate(self.piv[: self.rank])}
        return self.rank

    def _restart_point(self, start: int) -> int:
        # The kernel stops mid-row; rows before the current one are finished,
        # but it is simplest and still correct to restart at ``start``.
        return start

    def __repr__(self) -> str:
        return f"EchelonBasis({self.ring.name}, length={self.length}, rank={self.rank})"


def subspace_sum(A: EchelonBasis, B: EchelonBasis) -> EchelonBasis:
    out = A.copy()
    for r in B.rows():
        out.insert(r)
    return out


def subspace_intersection(A, B):
    """Basis of A ∩ B (Zassenhaus: rows (a, a) and (b, 0) in the doubled space)."""
    if A.length != B.length or A.ring != B.ring:
        raise ValueError("subspaces live in different spaces")
    L = A.length
    if isinstance(A, HowellBasis):
        return _howell_intersection(A, B)
    D = EchelonBasis(A.ring, 2 * L, capacity=A.rank + B.rank + 1)
    zero = np.zeros(L, dtype=np.int64)
    for r in A.rows():
        D.insert(np.concatenate([r, r]))
    for r in B.rows():
        D.insert(np.concatenate([r, zero]))
    out = EchelonBasis(A.ring, L, capacity=max(1, min(A.rank, B.rank)))
    for i in range(D.rank):
        if D.piv[i] >= L:
            out.insert(D.row(i)[L:])
    return out


# ---------------------------------------------------------------------------
# chain rings and Howell form


class ChainRing:
    """Z/p^2 (p = 2, 3) or Z/4[j]: local rings whose maximal ideal is (p), p^2 = 0.

    Elements are integer arrays of shape (2, ...) holding a + b*j with a, b
    taken mod p^2 (b is always 0 unless the ring has j).
    """

    def __init__(self, p: int, has_j: bool, name: str, spec: Optional[RingSpec] = None):
        self.p = p
        self.m = p * p
        self.has_j = has_j
        self.name = name
        self.spec = spec
        elems = [(a, b) for a in range(self.m) for b in (range(self.m) if has_j else [0])]
        self.elements = elems
        self._inv = {}
        for x in elems:
            for y in elems:
                if self.mul_scalar(x, y) == (1, 0):
                    self._inv[x] = y
        self.size = len(elems)

    def mul_scalar(self, x, y):
        a, b = x
        c, d = y
        m = self.m
        if not self.has_j:
            return ((a * c) % m, 0)
        return ((a * c - b * d) % m, (a * d + b * c - b * d) % m)

    def is_unit(self, x) -> bool:
        return (x[0] % self.p, x[1] % self.p) != (0, 0)

    def valuation(self, x) -> int:
        """0 for units, 1 for nonzero multiples of p, 2 for zero."""
        if (x[0] % self.m, x[1] % self.m) == (0, 0):
            return 2
        return 0 if self.is_unit(x) else 1

    def inv(self, x):
        return self._inv[(x[0] % self.m, x[1] % self.m)]

    def divide_by_p(self, x):
        """y with p*y = x for x in (p), reduced mod p."""
        return ((x[0] // self.p) % self.p, (x[1] // self.p) % self.p)

    def vec_scale(self, x: np.ndarray, s) -> np.ndarray:
        a, b = x[0], x[1]
        c, d = s
        m = self.m
        if not self.has_j:
            return np.stack([(a * c) % m, np.zeros_like(b)])
        return np.stack([(a * c - b * d) % m, (a * d + b * c - b * d) % m])

    def vec_add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x + y) % self.m

    def vec_sub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x - y) % self.m

    def encode_spec(self, vals: np.ndarray) -> np.ndarray:
        """From the RingSpec value encoding (Z4J: a + 4b) to shape (2, L)."""
        v = np.asarray(vals, dtype=np.int64)
        if self.has_j:
            return np.stack([v % 4, v // 4 % 4])
        return np.stack([v % self.m, np.zeros_like(v)])

    def decode_spec(self, x: np.ndarray) -> np.ndarray:
        if self.has_j:
            return (x[0] % 4) + 4 * (x[1] % 4)
        return x[0] % self.m

    def __repr__(self) -> str:
        return f"ChainRing({self.name})"


Z4C = ChainRing(2, False, "Z4", Z4)
Z9 = ChainRing(3, False, "Z9")
Z4JC = ChainRing(2, True, "Z4J", Z4J)


def chain_ring(ring) -> ChainRing:
    if isinstance(ring, ChainRing):
        return ring
    if ring == Z4:
        return Z4C
    if ring == Z4J:
        return Z4JC
    raise ValueError(f"{ring} is not a supported chain ring")


class HowellBasis:
    """Howell-form basis of a submodule of R^L for a chain ring R.

    Each stored row has a leading column c whose entry is 1 (level 0) or p
    (level 1).  At most one row per (column, level) is kept, a level-1 row
    only when no level-0 row exists at that column, and p times every level-1
    row is itself reduced into the basis.  Membership is then decided by
    reduction alone.
    """

    def __init__(self, ring, length: int):
        self.R = chain_ring(ring)
        self.ring = ring
        self.length = int(length)
        self._rows: Dict[int, Tuple[int, np.ndarray]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _lead(self, x: np.ndarray) -> int:
        nz = np.nonzero((x[0] % self.R.m) | (x[1] % self.R.m))[0]
        return int(nz[0]) if len(nz) else -1

    def _as2(self, row) -> np.ndarray:
        if isinstance(row, np.ndarray) and row.ndim == 2:
            return row.astype(np.int64) % self.R.m
        if isinstance(row, PackedRow):
            return self.R.encode_spec(row.to_values())
        return self.R.encode_spec(np.asarray(row))

    def reduce(self, row) -> np.ndarray:
        x = self._as2(row)
        R = self.R
        while True:
            c = self._lead(x)
            if c < 0:
                return x
            a = (int(x[0, c]), int(x[1, c]))
            e = R.valuation(a)
            if c not in self._rows:
                return x
            lvl, r = self._rows[c]
            if lvl > e:
                return x
            s = a if lvl == 0 else R.divide_by_p(a)
            x = R.vec_sub(x, R.vec_scale(r, s))

    def contains(self, row) -> bool:
        return self._lead(self.reduce(row)) < 0

    membership = contains

    def insert(self, row):
        pending = [self._as2(row)]
        first = None
        while pending:
            x = self.reduce(pending.pop())
            c = self._lead(x)
            if c < 0:
                continue
            R = self.R
            a = (int(x[0, c]), int(x[1, c]))
            e = R.valuation(a)
            if e == 0:
                x = R.vec_scale(x, R.inv(a))
            else:
                u = R.divide_by_p(a)
                # u is a unit mod p; lift its inverse
                x = R.vec_scale(x, R.inv(u))
            if c in self._rows:
                # existing level-1 row gives way to the new level-0 row
                _, old = self._rows.pop(c)
                pending.append(old)
            self._rows[c] = (e, x)
            if first is None:
                first = Added(c)
            if e == 1:
                px = R.vec_scale(x, (R.p, 0))
                if self._lead(px) >= 0:
                    pending.append(px)
        return first if first is not None else ReducedToZero

    def extend(self, rows: Iterable) -> int:
        n = 0
        for r in rows:
            if isinstance(self.insert(r), Added):
                n += 1
        return n

    def rows(self) -> List[np.ndarray]:
        return [self.R.decode_spec(self._rows[c][1]) for c in sorted(self._rows)]

    def rows2(self) -> List[np.ndarray]:
        return [self._rows[c][1] for c in sorted(self._rows)]

    def levels(self) -> Dict[int, int]:
        return {c: lv for c, (lv, _) in self._rows.items()}

    def log_size(self) -> int:
        """log_p |M| (each level-0 row contributes 2*deg, level-1 rows deg)."""
        deg = 2 if self.R.has_j else 1
        return sum((2 if lv == 0 else 1) * deg for lv, _ in self._rows.values())

    def free_rank(self) -> Optional[int]:
        """Rank r if the module is free (|M| = |R|^r), else None."""
        deg = 2 if self.R.has_j else 1
        pm = HowellBasis(self.R, self.length)
        for r in self.rows2():
            pm.insert(self.R.vec_scale(r, (self.R.p, 0)))
        a = pm.log_size() // deg
        return a if self.log_size() == 2 * deg * a else None

    def copy(self) -> "HowellBasis":
        out = HowellBasis(self.R, self.length)
        out._rows = {c: (lv, r.copy()) for c, (lv, r) in self._rows.items()}
        return out

    def close_under(self, maps: Sequence) -> int:
        """Spin under module maps given as callables on (2, L) arrays.

        Repeats full sweeps until one adds nothing; returns log_p |M|.
        """
        while True:
            before = self.log_size()
            for r in self.rows2():
                for f in maps:
                    self.insert(f(r))
            if self.log_size() == before:
                return before

    def __repr__(self) -> str:
        return f"HowellBasis({self.R.name}, length={self.length}, rows={self.rank})"


def _howell_intersection(A: HowellBasis, B: HowellBasis) -> HowellBasis:
    L = A.length
    D = HowellBasis(A.R, 2 * L)
    z = np.zeros((2, L), dtype=np.int64)
    for r in A.rows2():
        D.insert(np.concatenate([r, r], axis=1))
    for r in B.rows2():
        D.insert(np.concatenate([r, z], axis=1))
    out = HowellBasis(A.R, L)
    for c, (lv, r) in D._rows.items():
        if c >= L:
            out.insert(r[:, L:])
    return out


# ---------------------------------------------------------------------------
# ranks mod small moduli (used to cross-check SNF results)


def rank_mod(rows: np.ndarray, modulus: int) -> int:
    """Rank over F_p for prime modulus, or log_p |row module| over Z/p^2."""
    M = np.asarray(rows)
    if M.size == 0:
        return 0
    if modulus in (2, 3, 5, 7):
        from .coeff import F5, F7

        ring = {2: F2, 3: F3, 5: F5, 7: F7}[modulus]
        B = EchelonBasis(ring, M.shape[1], capacity=min(M.shape))
        for r in M:
            B.insert(np.asarray([int(x) % modulus for x in r], dtype=np.int64))
        return B.rank
    if modulus in (4, 9):
        R = Z4C if modulus == 4 else Z9
        H = HowellBasis(R, M.shape[1])
        for r in M:
            v = np.asarray([int(x) % modulus for x in r], dtype=np.int64)
            H.insert(np.stack([v, np.zeros_like(v)]))
        return H.log_size()
    raise ValueError("modulus must be one of 2, 3, 4, 5, 7, 9")


# ---------------------------------------------------------------------------
# integer lattices


_BIG = 2 ** 62


@dataclass
class IntLattice:
    """Row lattice in Z^m given by generator rows."""

    rows: List[Sequence[int]]
    m: int
    hermite: bool = False

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.m), dtype=object)
        return np.array([[int(x) for x in r] for r in self.rows], dtype=object)


def _to_int64_if_small(M: np.ndarray) -> np.ndarray:
    if M.dtype != object:
        return M
    if M.size == 0:
        return M.astype(np.int64)
    mx = max(abs(int(x)) for x in M.flat)
    return M.astype(np.int64) if mx < _BIG // 4 else M


def _safe(M: np.ndarray) -> np.ndarray:
    """Escalate to Python integers if entries approach the int64 limit."""
    if M.dtype == object or M.size == 0:
        return M
    if int(np.abs(M).max()) >= 2 ** 30:
        return M.astype(object)
    return M


def hermite_rows(M: np.ndarray) -> np.ndarray:
    """Row echelon form over Z (smallest-pivot Euclid per column)."""
    M = np.array(M, dtype=np.int64 if np.asarray(M).dtype != object else object)
    M = _safe(M)
    nrows, m = M.shape
    r = 0
    for c in range(m):
        if r >= nrows:
            break
        while True:
            col = M[r:, c]
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                break
            absv = np.abs(col[nz].astype(object)) if M.dtype == object else np.abs(col[nz])
            k = nz[int(np.argmin(absv))]
            if k != 0:
                M[[r, r + k]] = M[[r + k, r]]
            if len(nz) == 1 and (k == 0 or nz[0] == k):
                break
            piv = M[r, c]
            others = np.nonzero(M[r + 1:, c])[0] + r + 1
            if len(others) == 0:
                break
            q = M[others, c] // piv
            M[others] -= q[:, None] * M[r][None, :]
            M = _safe(M)
        if M[r, c] != 0:
            if M[r, c] < 0:
                M[r] = -M[r]
            r += 1
    return M[:r]


def smith_normal_form(M) -> List[int]:
    """Invariant factors d_1 | d_2 | ... (nonzero ones) of an integer matrix.

    Free rank of Z^m / rowspace is m - len(result); the torsion part is
    given by the factors larger than 1.
    """
    if isinstance(M, IntLattice):
        M = M.matrix()
    A = np.asarray(M)
    A = np.array(A, dtype=object) if A.dtype == object else np.array(A, dtype=np.int64)
    if A.size == 0:
        return []
    A = hermite_rows(A)
    A = _safe(A)
    n, m = A.shape
    diag: List[int] = []
    k = 0
    while k < min(n, m):
        sub = A[k:, k:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        vals = np.abs(np.array([sub[i, j] for i, j in nz], dtype=object))
        i, j = nz[int(np.argmin(vals))]
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        while True:
            piv = A[k, k]
            changed = False
            rows = np.nonzero(A[k + 1:, k])[0] + k + 1
            if len(rows):
                q = A[rows, k] // piv
                A[rows] -= q[:, None] * A[k][None, :]
                changed = True
            cols = np.nonzero(A[k, k + 1:])[0] + k + 1
            if len(cols):
                q = A[k, cols] // piv
                A[:, cols] -= A[:, k][:, None] * q[None, :]
                changed = True
            A = _safe(A)
            rest_r = np.nonzero(A[k + 1:, k])[0]
            rest_c = np.nonzero(A[k, k + 1:])[0]
            if len(rest_r) == 0 and len(rest_c) == 0:
                # divisibility: every remaining entry must be a multiple
                sub = A[k + 1:, k + 1:]
                bad = np.argwhere(sub % piv != 0) if sub.size else []
                if len(bad):
                    bi = bad[0][0] + k + 1
                    A[k] = A[k] + A[bi]
                    continue
                break
            # move the smallest nonzero of row/column k to the corner
            cand = [(abs(A[i2, k]), i2, k) for i2 in range(k, n) if A[i2, k] != 0]
            cand += [(abs(A[k, j2]), k, j2) for j2 in range(k, m) if A[k, j2] != 0]
            _, i2, j2 = min(cand)
            if i2 != k:
                A[[k, i2]] = A[[i2, k]]
            if j2 != k:
                A[:, [k, j2]] = A[:, [j2, k]]
        diag.append(abs(int(A[k, k])))
        k += 1
    return sorted(diag)


def snf_summary(factors: Sequence[int], m: int) -> Dict[str, object]:
    """Free rank and torsion multiplicities of Z^m / lattice."""
    free = m - len(factors)
    torsion: Dict[int, int] = {}
    for d in factors:
        if d > 1:
            torsion[d] = torsion.get(d, 0) + 1
    primary: Dict[int, int] = {}
    for d, mult in torsion.items():
        for q in _prime_powers(d):
            primary[q] = primary.get(q, 0) + mult
    return {"free_rank": free, "torsion": dict(sorted(torsion.items())),
            "primary": dict(sorted(primary.items()))}


def _prime_powers(d: int) -> List[int]:
    out, p = [], 2
    while d > 1:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    return out


def check_snf_against_ranks(M: np.ndarray, factors: Sequence[int]) -> Dict[str, bool]:
    """Compare SNF predictions with ranks modulo 2, 3, 5, 7, 4 and 9."""
    out: Dict[str, bool] = {}
    for p in (2, 3, 5, 7):
        pred = sum(1 for d in factors if d % p != 0)
        out[f"mod{p}"] = rank_mod(M, p) == pred
    for p, q in ((2, 4), (3, 9)):
        pred = 0
        for d in factors:
            v = 0
            while d % p == 0 and v < 2:
                d //= p
                v += 1
            pred += 2 - v
        out[f"mod{q}"] = rank_mod(M, q) == pred
    return out

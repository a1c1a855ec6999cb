"""Finite cubic braid quotients Gamma_n (n <= 5) as indexed permutation tables."""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _tc
from .braidword import BraidWord, normalize_letters, z_word

__all__ = [
    "GroupTable",
    "ClassPartition",
    "enumerate_group",
    "eval_word",
    "conjugacy_classes",
    "subgroup_closure",
    "verify_group_facts",
    "save",
    "load",
    "get_group",
    "EXPECTED_ORDERS",
]

EXPECTED_ORDERS = {2: 3, 3: 24, 4: 648, 5: 155520}
MAGIC = b"CGT1"
VERSION = 1


def _relators(n: int) -> List[List[int]]:
    """Relators as column lists; column 2i is s_{i+1}, column 2i+1 its inverse."""
    def col(x: int) -> int:
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    rels = []
    for i in range(1, n):
        rels.append([i, i, i])
    for i in range(1, n - 1):
        rels.append([i, i + 1, i, -(i + 1), -i, -(i + 1)])
    for i in range(1, n):
        for k in range(i + 2, n):
            rels.append([i, k, -i, -k])
    return [[col(x) for x in r] for r in rels]


class GroupTable:
    """Regular permutation representation of Gamma_n.

    Generator index g stands for s_{g//2 + 1} raised to the power g%2 + 1, so the
    order is s_1, s_1^2, s_2, s_2^2, ...  ``right[g][x]`` is x*g and
    ``left[g][x]`` is g*x.  Element 0 is the identity.
    """

    def __init__(self, n: int, left: np.ndarray, right: np.ndarray, inv: np.ndarray,
                 parent: Optional[np.ndarray] = None, pgen: Optional[np.ndarray] = None):
        self.n = n
        self.order = int(right.shape[1])
        self.left = left
        self.right = right
        self.inv = inv
        if parent is None or pgen is None:
            parent, pgen = _bfs_tree(right)
        self.parent = parent
        self.pgen = pgen
        self._mult: Optional[np.ndarray] = None
        self._classes: Optional["ClassPartition"] = None
        self._length: Optional[np.ndarray] = None

    @property
    def ngens(self) -> int:
        return self.right.shape[0]

    def gen_index(self, letter: int) -> int:
        """Generator index of the letter i (s_i) or -i (s_i^2)."""
        i = abs(letter)
        if not 1 <= i <= self.n - 1:
            raise ValueError(f"letter {letter} out of range for Gamma_{self.n}")
        return 2 * (i - 1) + (0 if letter > 0 else 1)

    def word(self, x: int) -> Tuple[int, ...]:
        """A word (letters i / -i) representing element x, from the BFS tree."""
        out = []
        while x != 0:
            g = int(self.pgen[x])
            out.append(g // 2 + 1 if g % 2 == 0 else -(g // 2 + 1))
            x = int(self.parent[x])
        return tuple(reversed(out))

    def mul(self, x: int, y: int) -> int:
        if self._mult is not None:
            return int(self._mult[x, y])
        for letter in self.word(y):
            x = int(self.right[self.gen_index(letter), x])
        return x

    def mult_table(self) -> np.ndarray:
        """Full multiplication table (only for small groups)."""
        if self._mult is None:
            if self.order > 5000:
                raise MemoryError("multiplication table too large")
            m = np.empty((self.order, self.order), dtype=np.int32)
            m[:, 0] = np.arange(self.order)
            for y in range(1, self.order):
                p, g = int(self.parent[y]), int(self.pgen[y])
                m[:, y] = self.right[g][m[:, p]]
            self._mult = m
        return self._mult

    def right_mul_perm(self, y: int) -> np.ndarray:
        """Permutation x -> x*y."""
        perm = np.arange(self.order)
        for letter in self.word(y):
            perm = self.right[self.gen_index(letter)][perm]
        return perm

    def left_mul_perm(self, y: int) -> np.ndarray:
        """Permutation x -> y*x."""
        perm = np.arange(self.order)
        for letter in reversed(self.word(y)):
            perm = self.left[self.gen_index(letter)][perm]
        return perm

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def power(self, x: int, k: int) -> int:
        y = 0
        for _ in range(k % self.element_order(x)):
            y = self.mul(y, x)
        return y

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.mul(self.mul(g, x), int(self.inv[g]))

    def length_mod3(self) -> np.ndarray:
        if self._length is None:
            ln = np.zeros(self.order, dtype=np.int64)
            for x in range(1, self.order):
                ln[x] = (ln[self.parent[x]] + 1 + self.pgen[x] % 2) % 3
            self._length = ln
        return self._length

    def eval(self, letters: Iterable[int]) -> int:
        x = 0
        for letter in letters:
            x = int(self.right[self.gen_index(letter), x])
        return x

    def classes(self) -> "ClassPartition":
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    def __repr__(self) -> str:
        return f"GroupTable(n={self.n}, order={self.order})"


def _bfs_tree(right: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    G, N = right.shape
    parent = np.full(N, -1, dtype=np.int64)
    pgen = np.full(N, -1, dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    seen[0] = True
    queue = [0]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in range(G):
            y = int(right[g, x])
            if not seen[y]:
                seen[y] = True
                parent[y], pgen[y] = x, g
                queue.append(y)
    return parent, pgen


def _left_and_inverse(right: np.ndarray, parent: np.ndarray, pgen: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    G, N = right.shape
    order = np.argsort(_depths(parent), kind="stable")
    left = np.empty_like(right)
    for g in range(G):
        lg = left[g]
        lg[0] = right[g, 0]
        for x in order[1:]:
            lg[x] = right[pgen[x], lg[parent[x]]]
    inv = np.empty(N, dtype=right.dtype)
    inv[0] = 0
    for x in order[1:]:
        h = pgen[x]
        hinv = h + 1 if h % 2 == 0 else h - 1
        inv[x] = left[hinv, inv[parent[x]]]
    return left, inv


def _depths(parent: np.ndarray) -> np.ndarray:
    d = np.zeros(len(parent), dtype=np.int64)
    for x in range(1, len(parent)):
        d[x] = d[parent[x]] + 1
    return d


def enumerate_group(n: int, capacity: Optional[int] = None) -> GroupTable:
    """Coset enumeration of <s_1..s_{n-1} | braid relations, s_i^3> over {1}."""
    if not 2 <= n <= 5:
        raise ValueError("Gamma_n is enumerated for 2 <= n <= 5 only")
    rels = _relators(n)
    width = max(len(r) for r in rels)
    rel_arr = np.zeros((len(rels), width), dtype=np.int64)
    for k, r in enumerate(rels):
        rel_arr[k, : len(r)] = r
    rlens = np.array([len(r) for r in rels], dtype=np.int64)
    ncol = 2 * (n - 1)
    inv = np.array([c + 1 if c % 2 == 0 else c - 1 for c in range(ncol)], dtype=np.int64)
    if capacity is None:
        capacity = {2: 64, 3: 4096, 4: 1 << 16, 5: 1 << 21}[n]
    table, p, used, failed = _tc.enumerate_cosets(rel_arr, rlens, inv, ncol, capacity)
    if failed:
        raise RuntimeError(f"coset enumeration for n={n} exceeded {capacity} cosets")
    cols = np.arange(ncol, dtype=np.int64)
    right, parent, pcol, k = _tc.bfs_renumber(table, p, used, cols)
    del table
    right = right.astype(np.int32)
    # column 2i+1 is s^{-1} = s^2, matching the generator order s_1, s_1^2, ...
    left, inverse = _left_and_inverse(right, parent, pcol)
    return GroupTable(n, left, right, inverse, parent, pcol)


def eval_word(T: GroupTable, w: BraidWord) -> int:
    if w.max_index() > T.n - 1:
        raise ValueError(f"word uses s_{w.max_index()} but the group has {T.n} strands")
    return T.eval(w.letters)


@dataclass
class ClassPartition:
    class_of: np.ndarray
    representatives: List[int]

    @property
    def count(self) -> int:
        return len(self.representatives)

    def size(self, k: int) -> int:
        return int(np.count_nonzero(self.class_of == k))


def conjugacy_classes(T: GroupTable) -> ClassPartition:
    """Orbits of x -> g x g^{-1} under the generators s_i."""
    N = T.order
    class_of = np.full(N, -1, dtype=np.int64)
    # x -> s x s^{-1} for each s_i; s^{-1} = s^2 has generator index g+1
    conj_maps = [T.left[g][T.right[g + 1]] for g in range(0, T.ngens, 2)]
    reps = []
    for x in range(N):
        if class_of[x] >= 0:
            continue
        k = len(reps)
        reps.append(x)
        class_of[x] = k
        stack = [x]
        while stack:
            y = stack.pop()
            for m in conj_maps:
                z = int(m[y])
                if class_of[z] < 0:
                    class_of[z] = k
                    stack.append(z)
    return ClassPartition(class_of, reps)


def subgroup_closure(T: GroupTable, gens: Sequence[int]) -> List[int]:
    if not len(gens):
        raise ValueError("need at least one generator")
    perms = [T.right_mul_perm(int(g)) for g in gens]
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for p in perms:
            y = int(p[x])
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return sorted(seen)


def center(T: GroupTable) -> List[int]:
    """Elements commuting with every generator."""
    mask = np.ones(T.order, dtype=bool)
    for g in range(0, T.ngens, 2):
        mask &= T.left[g] == T.right[g]
    return [int(x) for x in np.nonzero(mask)[0]]


def _conj_word(x: Sequence[int], by: Sequence[int]) -> Tuple[int, ...]:
    """x^{by} = by^{-1} x by."""
    inv = tuple(-a for a in reversed(by))
    return tuple(inv) + tuple(x) + tuple(by)


def quaternion_q0_words() -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Words for the generators i_0, j_0 of the quaternion subgroup Q_0 of Gamma_5."""
    a1 = (-2, 3, 1, -2, 3, 1, -2, -1)
    a2 = (-3, 2, -3, 1, 2, 3, 1)
    a3 = (-4, 3, -4, 3)
    a4 = (4, -3, 4, 2, 3, 1, -2, 1, 3, 1)
    a4inv = tuple(-x for x in reversed(a4))
    i0 = a4inv + a2 + a3 + a2
    j0 = a4 + a4 + a1
    return i0, j0


def verify_group_facts(T: GroupTable) -> Dict[str, bool]:
    """Identities in Gamma_5 about z_5, the retraction element and Q_0."""
    if T.n != 5:
        raise ValueError("needs the Gamma_5 table")
    e = T.eval
    z5 = e(z_word(5).letters)
    z4 = e(z_word(4).letters)
    rep: Dict[str, bool] = {}
    rep["z5_order_6"] = T.element_order(z5) == 6
    cen = center(T)
    rep["center_is_z5"] = sorted(cen) == sorted({T.power(z5, k) for k in range(6)})
    c23 = (2, 3) * 3
    c34 = (3, 4) * 3
    s1_a = _conj_word((1,), c23)
    s1_b = _conj_word((1,), c23 + c34)
    rep["z5_squared_word"] = T.power(z5, 2) == e((3, 1) + s1_a + s1_b)
    rep["z5_cubed_word"] = T.power(z5, 3) == e(((1, 2) * 3 + (3, 4) * 3) * 3)
    r = T.mul(T.power(z4, 2), T.power(z5, 2))
    s4 = e((4,))
    rep["retraction_order_3"] = T.element_order(r) == 3
    rep["retraction_commutes"] = all(T.mul(r, e((i,))) == T.mul(e((i,)), r) for i in (1, 2, 3))
    rep["retraction_braid"] = T.mul(T.mul(s4, r), s4) == T.mul(T.mul(r, s4), r)
    i0w, j0w = quaternion_q0_words()
    i0, j0 = e(i0w), e(j0w)
    q0 = subgroup_closure(T, [i0, j0])
    z53 = T.power(z5, 3)
    rep["q0_order_8"] = len(q0) == 8
    sq = T.mul(i0, i0)
    rep["q0_quaternion_relations"] = sq == T.mul(j0, j0) == T.mul(T.mul(i0, j0), T.mul(i0, j0)) and sq != 0
    rep["q0_center_z5_cubed"] = sq == z53
    ln = T.length_mod3()
    rep["length_map_kernel_index_3"] = int(np.count_nonzero(ln == 0)) * 3 == T.order
    return rep


# ---------------------------------------------------------------------------
# persistence


def save(T: GroupTable, path: str) -> None:
    G = T.ngens
    body = bytearray()
    body += MAGIC
    body += struct.pack("<HHIB", VERSION, T.n, T.order, G)
    for arr in list(T.left) + list(T.right) + [T.inv]:
        body += np.asarray(arr, dtype="<u4").tobytes()
    body += struct.pack("<I", zlib.crc32(bytes(body)) & 0xFFFFFFFF)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(body)
    os.replace(tmp, path)


def load(path: str) -> GroupTable:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 17 or data[:4] != MAGIC:
        raise ValueError("bad magic: not a group table file")
    version, n, N, G = struct.unpack_from("<HHIB", data, 4)
    if version != VERSION:
        raise ValueError(f"unsupported table version {version}")
    expect = 4 + 9 + (2 * G + 1) * N * 4 + 4
    if len(data) != expect:
        raise ValueError(f"truncated table file ({len(data)} bytes, expected {expect})")
    (crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) & 0xFFFFFFFF != crc:
        raise ValueError("checksum mismatch")
    arrs = np.frombuffer(data, dtype="<u4", count=(2 * G + 1) * N, offset=13).reshape(2 * G + 1, N)
    left = arrs[:G].astype(np.int32)
    right = arrs[G : 2 * G].astype(np.int32)
    inv = arrs[2 * G].astype(np.int32)
    return GroupTable(n, left, right, inv)


def default_cache_dir() -> str:
    return os.environ.get("CUBICBRAID_CACHE", os.path.join(os.path.expanduser("~"), ".cache", "cubicbraid"))


_MEMO: Dict[int, GroupTable] = {}


def get_group(n: int, cache_dir: Optional[str] = None, use_cache: bool = True) -> GroupTable:
    """Gamma_n, memoized in-process and cached on disk for n = 5."""
    if n in _MEMO:
        return _MEMO[n]
    T = None
    path = None
    if use_cache and n == 5:
        cdir = cache_dir or default_cache_dir()
        path = os.path.join(cdir, f"gamma{n}.v{VERSION}.cgt")
        if os.path.exists(path):
            try:
                T = load(path)
            except ValueError:
                T = None
    if T is None:
        T = enumerate_group(n)
        if path is not None:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            save(T, path)
    _MEMO[n] = T
    return T

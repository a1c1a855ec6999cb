"""Coefficient rings, packed rows and small polynomial arithmetic.

Scalars are plain Python values with a fixed encoding per ring:

* F2, F3, Fp, Z4 : integers in ``range(size)``
* F4            : ``a + 2*b`` standing for ``a + b*j`` (so 2 is j, 3 is j^2)
* Z4J           : ``a + 4*b`` standing for ``a + b*j`` with a, b mod 4
* ZJ            : tuple ``(a, b)`` of Python ints, ``a + b*j`` in Z[j]
* Z             : Python int

Rows over F2, F3, F4, Z4 and Z4J are stored as bit planes of 64-bit words.
Rows over Fp (p = 5, 7) and Z are stored unpacked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

__all__ = [
    "RingSpec",
    "F2",
    "F3",
    "F4",
    "F5",
    "F7",
    "Z4",
    "Z4J",
    "ZJ",
    "ZZ",
    "ring_from_name",
    "PackedRow",
    "row_axpy",
    "row_permute",
    "Poly",
]

_PACKED_PLANES = {"F2": 1, "F3": 2, "F4": 2, "Z4": 2, "Z4J": 4}

# F4 multiplication table in the a + 2b encoding
_F4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
_F4_INV = [0, 1, 3, 2]


@dataclass(frozen=True)
class RingSpec:
    """One of the small coefficient rings used throughout the package."""

    tag: str
    p: int = 0

    def __post_init__(self):
        if self.tag not in ("F2", "F3", "F4", "Fp", "Z4", "Z4J", "ZJ", "Z"):
            raise ValueError(f"unknown ring tag {self.tag!r}")
        if self.tag == "Fp" and self.p not in (5, 7):
            raise ValueError("Fp is only supported for p = 5, 7")

    # -- descriptive properties ---------------------------------------
    @property
    def name(self) -> str:
        return f"F{self.p}" if self.tag == "Fp" else self.tag

    @property
    def size(self) -> int:
        """Number of elements (0 for the infinite rings)."""
        return {"F2": 2, "F3": 3, "F4": 4, "Fp": self.p, "Z4": 4, "Z4J": 16}.get(self.tag, 0)

    @property
    def is_field(self) -> bool:
        return self.tag in ("F2", "F3", "F4", "Fp")

    @property
    def has_j(self) -> bool:
        return self.tag in ("F4", "Z4J", "ZJ")

    @property
    def characteristic(self) -> int:
        return {"F2": 2, "F3": 3, "F4": 2, "Fp": self.p, "Z4": 4, "Z4J": 4}.get(self.tag, 0)

    @property
    def planes(self) -> int:
        """Bit planes per packed row, 0 when rows are stored unpacked."""
        return _PACKED_PLANES.get(self.tag, 0)

    def __repr__(self) -> str:
        return f"RingSpec({self.name})"

    # -- scalars --------------------------------------------------------
    def zero(self):
        return (0, 0) if self.tag == "ZJ" else 0

    def one(self):
        return (1, 0) if self.tag == "ZJ" else 1

    @property
    def j(self):
        if self.tag == "F4":
            return 2
        if self.tag == "Z4J":
            return 4
        if self.tag == "ZJ":
            return (0, 1)
        raise ValueError(f"{self.name} has no cube root of unity j")

    def elements(self) -> List:
        if self.size == 0:
            raise ValueError(f"{self.name} is infinite")
        return list(range(self.size))

    def from_int(self, k: int):
        t = self.tag
        if t == "ZJ":
            return (k, 0)
        if t == "Z":
            return k
        if t == "F4":
            return k % 2
        return k % self.characteristic

    def _split4(self, x) -> Tuple[int, int]:
        return x % 4, x // 4

    def add(self, x, y):
        t = self.tag
        if t == "F2" or t == "F4":
            return x ^ y
        if t == "Z":
            return x + y
        if t == "ZJ":
            return (x[0] + y[0], x[1] + y[1])
        if t == "Z4J":
            return ((x % 4 + y % 4) % 4) + 4 * ((x // 4 + y // 4) % 4)
        return (x + y) % self.characteristic

    def neg(self, x):
        t = self.tag
        if t == "F2" or t == "F4":
            return x
        if t == "Z":
            return -x
        if t == "ZJ":
            return (-x[0], -x[1])
        if t == "Z4J":
            return (-(x % 4)) % 4 + 4 * ((-(x // 4)) % 4)
        return (-x) % self.characteristic

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        t = self.tag
        if t == "F4":
            return _F4_MUL[x][y]
        if t == "Z":
            return x * y
        if t == "ZJ":
            a, b = x
            c, d = y
            # j^2 = -1 - j
            return (a * c - b * d, a * d + b * c - b * d)
        if t == "Z4J":
            a, b = self._split4(x)
            c, d = self._split4(y)
            return (a * c - b * d) % 4 + 4 * ((a * d + b * c - b * d) % 4)
        return (x * y) % self.characteristic

    def pow(self, x, k: int):
        r = self.one()
        for _ in range(k):
            r = self.mul(r, x)
        return r

    def is_zero(self, x) -> bool:
        return x == self.zero()

    def is_unit(self, x) -> bool:
        t = self.tag
        if t in ("F2", "F3", "F4", "Fp"):
            return x != 0
        if t == "Z4":
            return x % 2 == 1
        if t == "Z4J":
            # units of Z/4[j] are the elements whose reduction mod 2 is nonzero in F4
            return (x % 4) % 2 == 1 or (x // 4) % 2 == 1
        if t == "Z":
            return x in (1, -1)
        return x in ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1))

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x!r} is not a unit in {self.name}")
        if self.tag == "F4":
            return _F4_INV[x]
        if self.tag in ("Z", "ZJ"):
            for y in ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)) if self.tag == "ZJ" else (1, -1):
                if self.mul(x, y) == self.one():
                    return y
        for y in range(self.size):
            if self.mul(x, y) == 1:
                return y
        raise ZeroDivisionError(x)

    def frobenius(self, x):
        """j -> j^2 conjugation (identity on rings without j)."""
        if self.tag == "F4":
            return _F4_MUL[x][x]
        if self.tag == "Z4J":
            a, b = self._split4(x)
            return (a - b) % 4 + 4 * ((-b) % 4)
        if self.tag == "ZJ":
            return (x[0] - x[1], -x[1])
        return x

    def fmt(self, x) -> str:
        t = self.tag
        if t == "F4":
            return ["0", "1", "j", "j²"][x]
        if t in ("Z4J", "ZJ"):
            a, b = (x[0], x[1]) if t == "ZJ" else self._split4(x)
            if b == 0:
                return str(a)
            if a == 0:
                return f"{b}j" if b != 1 else "j"
            return f"({a}+{b}j)" if b != 1 else f"({a}+j)"
        return str(x)


F2 = RingSpec("F2")
F3 = RingSpec("F3")
F4 = RingSpec("F4")
F5 = RingSpec("Fp", 5)
F7 = RingSpec("Fp", 7)
Z4 = RingSpec("Z4")
Z4J = RingSpec("Z4J")
ZJ = RingSpec("ZJ")
ZZ = RingSpec("Z")

_BY_NAME = {"f2": F2, "f3": F3, "f4": F4, "f5": F5, "f7": F7, "z4": Z4, "z4j": Z4J, "zj": ZJ, "z": ZZ}


def ring_from_name(name: str) -> RingSpec:
    try:
        return _BY_NAME[name.lower()]
    except KeyError:
        raise ValueError(f"unknown ring {name!r}") from None


# ---------------------------------------------------------------------------
# plane arithmetic on uint64 word arrays


def _f3_add(a0, a1, b0, b1):
    # planes hold indicator bits of the values 1 and 2
    z_a = ~(a0 | a1)
    z_b = ~(b0 | b1)
    r0 = (a0 & z_b) | (b0 & z_a) | (a1 & b1)
    r1 = (a1 & z_b) | (b1 & z_a) | (a0 & b0)
    return r0, r1


def _z4_add(a0, a1, b0, b1):
    return a0 ^ b0, a1 ^ b1 ^ (a0 & b0)


def _z4_neg(a0, a1):
    return a0.copy(), a1 ^ a0


def _z4_scale(a0, a1, c: int):
    c %= 4
    if c == 0:
        return np.zeros_like(a0), np.zeros_like(a1)
    if c == 1:
        return a0.copy(), a1.copy()
    if c == 2:
        return np.zeros_like(a0), a0.copy()
    return _z4_neg(a0, a1)


def _z4j_mul_j(p):
    # j(a + bj) = -b + (a - b)j
    a0, a1, b0, b1 = p
    nb0, nb1 = _z4_neg(b0, b1)
    c0, c1 = _z4_add(a0, a1, nb0, nb1)
    return nb0, nb1, c0, c1


def _scale_planes(ring: RingSpec, planes: np.ndarray, c) -> np.ndarray:
    t = ring.tag
    out = np.zeros_like(planes)
    if t == "F2":
        if c:
            out[:] = planes
    elif t == "F3":
        if c == 1:
            out[:] = planes
        elif c == 2:
            out[0], out[1] = planes[1], planes[0]
    elif t == "F4":
        a, b = planes[0], planes[1]
        if c == 1:
            out[:] = planes
        elif c == 2:
            out[0], out[1] = b, a ^ b
        elif c == 3:
            out[0], out[1] = a ^ b, a
    elif t == "Z4":
        out[0], out[1] = _z4_scale(planes[0], planes[1], c)
    elif t == "Z4J":
        c0, c1 = c % 4, c // 4
        x0, x1 = _z4_scale(planes[0], planes[1], c0)
        y0, y1 = _z4_scale(planes[2], planes[3], c0)
        jp = _z4j_mul_j(planes)
        u0, u1 = _z4_scale(jp[0], jp[1], c1)
        w0, w1 = _z4_scale(jp[2], jp[3], c1)
        out[0], out[1] = _z4_add(x0, x1, u0, u1)
        out[2], out[3] = _z4_add(y0, y1, w0, w1)
    else:
        raise ValueError(ring)
    return out


def _add_planes(ring: RingSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    t = ring.tag
    if t in ("F2", "F4"):
        return x ^ y
    out = np.empty_like(x)
    if t == "F3":
        out[0], out[1] = _f3_add(x[0], x[1], y[0], y[1])
    elif t == "Z4":
        out[0], out[1] = _z4_add(x[0], x[1], y[0], y[1])
    elif t == "Z4J":
        out[0], out[1] = _z4_add(x[0], x[1], y[0], y[1])
        out[2], out[3] = _z4_add(x[2], x[3], y[2], y[3])
    else:
        raise ValueError(ring)
    return out


def _values_to_planes(ring: RingSpec, values: np.ndarray) -> np.ndarray:
    n = len(values)
    nw = (n + 63) // 64
    P = ring.planes
    out = np.zeros((P, nw), dtype=np.uint64)
    v = np.asarray(values, dtype=np.int64)
    if ring.tag == "F3":
        bits = [v == 1, v == 2]
    elif ring.tag == "Z4J":
        bits = [(v >> k) & 1 for k in range(4)]
    else:
        bits = [(v >> k) & 1 for k in range(P)]
    pad = nw * 64 - n
    for k in range(P):
        b = np.concatenate([np.asarray(bits[k], dtype=np.uint8), np.zeros(pad, dtype=np.uint8)])
        out[k] = np.packbits(b, bitorder="little").view(np.uint64)
    return out


def _planes_to_values(ring: RingSpec, planes: np.ndarray, n: int) -> np.ndarray:
    P = planes.shape[0]
    bits = [np.unpackbits(planes[k].view(np.uint8), bitorder="little")[:n].astype(np.int64) for k in range(P)]
    if ring.tag == "F3":
        return bits[0] + 2 * bits[1]
    out = np.zeros(n, dtype=np.int64)
    for k in range(P):
        out |= bits[k] << k
    return out


class PackedRow:
    """A coefficient row over one of the small rings.

    Packed rings keep ``planes`` (shape ``(P, words)``); Fp and Z rows keep
    ``values`` unpacked.  Trailing bits past ``length`` are always zero.
    """

    __slots__ = ("ring", "length", "planes", "values")

    def __init__(self, ring: RingSpec, length: int, planes=None, values=None):
        self.ring = ring
        self.length = length
        self.planes = planes
        self.values = values

    @classmethod
    def zeros(cls, ring: RingSpec, length: int) -> "PackedRow":
        if ring.planes:
            return cls(ring, length, planes=np.zeros((ring.planes, (length + 63) // 64), dtype=np.uint64))
        if ring.tag == "ZJ":
            raise ValueError("ZJ rows are not supported")
        return cls(ring, length, values=np.zeros(length, dtype=object if ring.tag == "Z" else np.int64))

    @classmethod
    def from_values(cls, ring: RingSpec, values: Sequence) -> "PackedRow":
        n = len(values)
        if ring.planes:
            return cls(ring, n, planes=_values_to_planes(ring, np.asarray(values, dtype=np.int64)))
        if ring.tag == "Z":
            return cls(ring, n, values=np.array([int(x) for x in values], dtype=object))
        return cls(ring, n, values=np.asarray(values, dtype=np.int64) % ring.p)

    def to_values(self) -> np.ndarray:
        if self.planes is not None:
            return _planes_to_values(self.ring, self.planes, self.length)
        return self.values.copy()

    def copy(self) -> "PackedRow":
        if self.planes is not None:
            return PackedRow(self.ring, self.length, planes=self.planes.copy())
        return PackedRow(self.ring, self.length, values=self.values.copy())

    def get(self, i: int):
        if not 0 <= i < self.length:
            raise IndexError(i)
        if self.planes is None:
            return self.values[i]
        w, b = divmod(i, 64)
        bits = [int((int(self.planes[k, w]) >> b) & 1) for k in range(self.planes.shape[0])]
        if self.ring.tag == "F3":
            return bits[0] + 2 * bits[1]
        return sum(bit << k for k, bit in enumerate(bits))

    def set(self, i: int, x) -> None:
        if not 0 <= i < self.length:
            raise IndexError(i)
        if self.planes is None:
            self.values[i] = x if self.ring.tag == "Z" else x % self.ring.p
            return
        w, b = divmod(i, 64)
        if self.ring.tag == "F3":
            bits = [int(x == 1), int(x == 2)]
        else:
            bits = [(x >> k) & 1 for k in range(self.planes.shape[0])]
        mask = np.uint64(1 << b)
        for k, bit in enumerate(bits):
            if bit:
                self.planes[k, w] |= mask
            else:
                self.planes[k, w] &= ~mask

    def is_zero(self) -> bool:
        if self.planes is not None:
            return not self.planes.any()
        return not any(self.values)

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.to_values()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PackedRow):
            return NotImplemented
        if self.ring != other.ring or self.length != other.length:
            return False
        if self.planes is not None:
            return bool(np.array_equal(self.planes, other.planes))
        return bool(np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        vals = self.to_values()
        body = ", ".join(self.ring.fmt(int(x) if self.ring.tag != "Z" else x) for x in vals[:12])
        more = ", ..." if self.length > 12 else ""
        return f"PackedRow({self.ring.name}, [{body}{more}])"

    def scaled(self, c) -> "PackedRow":
        if self.planes is not None:
            return PackedRow(self.ring, self.length, planes=_scale_planes(self.ring, self.planes, c))
        if self.ring.tag == "Z":
            return PackedRow(self.ring, self.length, values=self.values * c)
        return PackedRow(self.ring, self.length, values=(self.values * c) % self.ring.p)


def _check_compatible(a: PackedRow, b: PackedRow) -> None:
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring.name} vs {b.ring.name}")
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")


def row_axpy(dst: PackedRow, src: PackedRow, scalar) -> PackedRow:
    """Return dst + scalar*src."""
    _check_compatible(dst, src)
    ring = dst.ring
    if dst.planes is not None:
        if ring.tag == "F2":
            planes = dst.planes ^ src.planes if scalar else dst.planes.copy()
        else:
            planes = _add_planes(ring, dst.planes, _scale_planes(ring, src.planes, scalar))
        return PackedRow(ring, dst.length, planes=planes)
    if ring.tag == "Z":
        return PackedRow(ring, dst.length, values=dst.values + scalar * src.values)
    return PackedRow(ring, dst.length, values=(dst.values + scalar * src.values) % ring.p)


def row_permute(row: PackedRow, perm: Sequence[int]) -> PackedRow:
    """Return out with out[perm[i]] = row[i]."""
    perm = np.asarray(perm, dtype=np.int64)
    n = row.length
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError("perm is not a bijection on the coordinates")
    vals = row.to_values()
    out = np.empty_like(vals)
    out[perm] = vals
    return PackedRow.from_values(row.ring, out) if row.planes is not None else PackedRow(row.ring, n, values=out)


# ---------------------------------------------------------------------------
# polynomials in u, v


_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Poly:
    """Polynomial in the variables (u, v) with coefficients in a RingSpec.

    Stored as a dict from exponent pairs to nonzero coefficients.
    """

    __slots__ = ("ring", "terms")
    VARS = ("u", "v")

    def __init__(self, ring: RingSpec, terms: Dict[Tuple[int, int], object] = None):
        self.ring = ring
        clean = {}
        for mono, c in (terms or {}).items():
            if not ring.is_zero(c):
                clean[mono] = c
        self.terms = clean

    @classmethod
    def const(cls, ring: RingSpec, c) -> "Poly":
        """Constant polynomial; c is a ring element in the ring's own encoding."""
        return cls(ring, {(0, 0): c})

    @classmethod
    def u(cls, ring: RingSpec = ZZ) -> "Poly":
        return cls(ring, {(1, 0): ring.one()})

    @classmethod
    def v(cls, ring: RingSpec = ZZ) -> "Poly":
        return cls(ring, {(0, 1): ring.one()})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("coefficient ring mismatch")
            return other
        if isinstance(other, int):
            return Poly.const(self.ring, self.ring.from_int(other))
        return Poly.const(self.ring, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        r = self.ring
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = r.add(out[m], c) if m in out else c
        return Poly(r, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: self.ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        r = self.ring
        out: Dict[Tuple[int, int], object] = {}
        for (a, b), c in self.terms.items():
            for (x, y), d in other.terms.items():
                m = (a + x, b + y)
                p = r.mul(c, d)
                out[m] = r.add(out[m], p) if m in out else p
        return Poly(r, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.ring, self.ring.one())
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.const(self.ring, self.ring.from_int(other))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def coeff(self, a: int, b: int):
        return self.terms.get((a, b), self.ring.zero())

    def substitute_v(self, expr: "Poly") -> "Poly":
        """Ring morphism fixing u and sending v to expr."""
        out = Poly(self.ring)
        cache = {0: Poly.const(self.ring, self.ring.one())}
        for (a, b), c in self.terms.items():
            if b not in cache:
                cache[b] = expr ** b
            out = out + Poly(self.ring, {(a, 0): c}) * cache[b]
        return out

    def change_ring(self, ring: RingSpec) -> "Poly":
        """Reduce integer (or Z[j]) coefficients into ring."""
        out = {}
        for m, c in self.terms.items():
            if self.ring.tag == "Z":
                out[m] = ring.from_int(c)
            elif self.ring.tag == "ZJ" and ring.tag == "Z4J":
                out[m] = (c[0] % 4) + 4 * (c[1] % 4)
            elif self.ring == ring:
                out[m] = c
            else:
                raise ValueError(f"cannot map {self.ring.name} to {ring.name}")
        return Poly(ring, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        # v-degree first, then u-degree
        for (a, b) in sorted(self.terms, key=lambda m: (m[1], m[0])):
            c = self.terms[(a, b)]
            mono = ""
            if a:
                mono += "u" + (str(a).translate(_SUP) if a > 1 else "")
            if b:
                mono += "v" + (str(b).translate(_SUP) if b > 1 else "")
            if self.ring.tag == "Z":
                sign = "−" if c < 0 else "+"
                mag = abs(c)
                body = (str(mag) if (mag != 1 or not mono) else "") + mono
            else:
                sign = "+"
                cs = self.ring.fmt(c)
                body = (cs if (cs != "1" or not mono) else "") + mono
            pieces.append((sign, body))
        out = ("−" if pieces[0][0] == "−" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += sign + body
        return out

    __repr__ = __str__

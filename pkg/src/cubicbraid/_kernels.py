"""Compiled echelon kernels.

Two storage layouts share one calling convention:

* packed: rows are ``uint64[P, W]`` bit planes (code 0 = F2 with one plane,
  1 = F3 with indicator planes for the values 1 and 2, 2 = F4 with planes
  a, b for a + b*j);
* dense: rows are ``uint8[L]`` holding residues mod a prime p.

A basis is a stack of rows in insertion order together with the pivot column
of each row.  Rows are kept in semi-echelon form: every stored row vanishes on
the pivots of earlier rows and before its own pivot, and its pivot entry is 1.
Reducing a vector against the rows in insertion order therefore takes a
single pass.
"""

from __future__ import annotations

import numpy as np
from numba import njit

PACKED_CODES = {"F2": 0, "F3": 1, "F4": 2}

# F4 tables in the encoding a + 2b <-> a + b*j
F4_MUL = np.array([[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]], dtype=np.uint8)
F4_INV = np.array([0, 1, 3, 2], dtype=np.uint8)


def field_tables(tag: str, p: int = 0):
    """(add, mul, neg, inv) lookup tables on the value encoding of a field."""
    if tag == "F4":
        add = np.array([[a ^ b for b in range(4)] for a in range(4)], dtype=np.uint8)
        return add, F4_MUL.copy(), np.arange(4, dtype=np.uint8), F4_INV.copy()
    q = {"F2": 2, "F3": 3}.get(tag, p)
    add = np.array([[(a + b) % q for b in range(q)] for a in range(q)], dtype=np.uint8)
    mul = np.array([[(a * b) % q for b in range(q)] for a in range(q)], dtype=np.uint8)
    neg = np.array([(-a) % q for a in range(q)], dtype=np.uint8)
    inv = np.array([pow(a, q - 2, q) if a else 0 for a in range(q)], dtype=np.uint8)
    return add, mul, neg, inv


# ---------------------------------------------------------------------------
# packed rows


@njit(cache=True)
def pk_get(code, x, c):
    w = c >> 6
    b = np.uint64(c & 63)
    one = np.uint64(1)
    if code == 0:
        return np.int64((x[0, w] >> b) & one)
    lo = np.int64((x[0, w] >> b) & one)
    hi = np.int64((x[1, w] >> b) & one)
    return lo + 2 * hi


@njit(cache=True)
def pk_axpy(code, dst, src, s, w0):
    """dst += s*src on words w0.. (s in the value encoding, nonzero)."""
    W = dst.shape[1]
    if code == 0:
        for w in range(w0, W):
            dst[0, w] ^= src[0, w]
    elif code == 2:
        if s == 1:
            for w in range(w0, W):
                dst[0, w] ^= src[0, w]
                dst[1, w] ^= src[1, w]
        elif s == 2:
            # j*(a + bj) = b + (a + b)j
            for w in range(w0, W):
                a = src[0, w]
                b = src[1, w]
                dst[0, w] ^= b
                dst[1, w] ^= a ^ b
        else:
            # j^2*(a + bj) = (a + b) + aj
            for w in range(w0, W):
                a = src[0, w]
                b = src[1, w]
                dst[0, w] ^= a ^ b
                dst[1, w] ^= a
    else:
        for w in range(w0, W):
            if s == 1:
                b0 = src[0, w]
                b1 = src[1, w]
            else:
                b0 = src[1, w]
                b1 = src[0, w]
            a0 = dst[0, w]
            a1 = dst[1, w]
            za = ~(a0 | a1)
            zb = ~(b0 | b1)
            dst[0, w] = (a0 & zb) | (b0 & za) | (a1 & b1)
            dst[1, w] = (a1 & zb) | (b1 & za) | (a0 & b0)


@njit(cache=True)
def pk_neg(code, c):
    if code == 1:
        return 3 - c
    return c


@njit(cache=True)
def pk_inv(code, c):
    if code == 2:
        if c == 2:
            return 3
        if c == 3:
            return 2
    return c


@njit(cache=True)
def pk_first_nonzero(x):
    P = x.shape[0]
    W = x.shape[1]
    for w in range(W):
        acc = np.uint64(0)
        for k in range(P):
            acc |= x[k, w]
        if acc != 0:
            b = 0
            while ((acc >> np.uint64(b)) & np.uint64(1)) == 0:
                b += 1
            return w * 64 + b
    return -1


@njit(cache=True)
def pk_scale(code, x, s):
    """x <- s*x in place."""
    if s == 1 or code == 0:
        return
    W = x.shape[1]
    if code == 1:
        for w in range(W):
            t = x[0, w]
            x[0, w] = x[1, w]
            x[1, w] = t
    elif s == 2:
        for w in range(W):
            a = x[0, w]
            b = x[1, w]
            x[0, w] = b
            x[1, w] = a ^ b
    else:
        for w in range(W):
            a = x[0, w]
            b = x[1, w]
            x[0, w] = a ^ b
            x[1, w] = a


@njit(cache=True)
def pk_reduce(code, B, piv, nrows, x):
    for r in range(nrows):
        c = piv[r]
        e = pk_get(code, x, c)
        if e != 0:
            pk_axpy(code, x, B[r], pk_neg(code, e), c >> 6)


@njit(cache=True)
def pk_insert(code, B, piv, nrows, x):
    """Reduce x, and if nonzero store it as row nrows.  Returns the pivot or -1."""
    pk_reduce(code, B, piv, nrows, x)
    c = pk_first_nonzero(x)
    if c < 0:
        return -1
    pk_scale(code, x, pk_inv(code, pk_get(code, x, c)))
    B[nrows, :, :] = x
    piv[nrows] = c
    return c


@njit(cache=True)
def pk_pack(code, vals, W):
    P = 1 if code == 0 else 2
    out = np.zeros((P, W), dtype=np.uint64)
    for i in range(vals.shape[0]):
        v = vals[i]
        if v == 0:
            continue
        w = i >> 6
        m = np.uint64(1) << np.uint64(i & 63)
        if code == 1:
            if v == 1:
                out[0, w] |= m
            else:
                out[1, w] |= m
        else:
            if v & 1:
                out[0, w] |= m
            if v & 2:
                out[1, w] |= m
    return out


@njit(cache=True)
def pk_unpack(code, x, L):
    out = np.zeros(L, dtype=np.uint8)
    P = x.shape[0]
    for w in range(x.shape[1]):
        acc = np.uint64(0)
        for k in range(P):
            acc |= x[k, w]
        if acc == 0:
            continue
        for b in range(64):
            i = w * 64 + b
            if i >= L:
                break
            m = np.uint64(1) << np.uint64(b)
            if acc & m:
                lo = 1 if (x[0, w] & m) else 0
                hi = 0
                if P > 1:
                    hi = 1 if (x[1, w] & m) else 0
                out[i] = lo + 2 * hi
    return out


# ---------------------------------------------------------------------------
# dense rows mod p


@njit(cache=True)
def dn_reduce(p, B, piv, nrows, x):
    L = x.shape[0]
    for r in range(nrows):
        c = piv[r]
        e = x[c]
        if e != 0:
            f = p - e
            row = B[r]
            for i in range(c, L):
                if row[i] != 0:
                    x[i] = (x[i] + f * row[i]) % p


@njit(cache=True)
def dn_insert(p, B, piv, nrows, x):
    dn_reduce(p, B, piv, nrows, x)
    L = x.shape[0]
    c = -1
    for i in range(L):
        if x[i] != 0:
            c = i
            break
    if c < 0:
        return -1
    e = np.int64(x[c])
    inv = 1
    for k in range(1, p):
        if (e * k) % p == 1:
            inv = k
            break
    for i in range(c, L):
        x[i] = (x[i] * inv) % p
    B[nrows, :] = x
    piv[nrows] = c
    return c


# ---------------------------------------------------------------------------
# sparse linear actions on value vectors
#
# An action is stored as tgt[L, 2] (target indices, -1 for none) and
# coef[L, 2] (field values): out[tgt[i, t]] += coef[i, t] * x[i].


@njit(cache=True)
def apply_action(tgt, coef, add, mul, x):
    L = x.shape[0]
    out = np.zeros(L, dtype=np.uint8)
    for i in range(L):
        v = x[i]
        if v == 0:
            continue
        for t in range(tgt.shape[1]):
            d = tgt[i, t]
            if d >= 0:
                out[d] = add[out[d], mul[coef[i, t], v]]
    return out


@njit(cache=True)
def pk_closure(code, B, piv, nrows, tgts, coefs, add, mul, L, start):
    """Spin rows start.. under every action until the span is stable.

    Returns the new row count, or -(count) - 1 when B ran out of capacity.
    """
    W = B.shape[2]
    i = start
    cap = B.shape[0]
    while i < nrows:
        v = pk_unpack(code, B[i], L)
        for a in range(tgts.shape[0]):
            y = apply_action(tgts[a], coefs[a], add, mul, v)
            x = pk_pack(code, y, W)
            if nrows >= cap:
                pk_reduce(code, B, piv, nrows, x)
                if pk_first_nonzero(x) >= 0:
                    return -nrows - 1
                continue
            if pk_insert(code, B, piv, nrows, x) >= 0:
                nrows += 1
        i += 1
    return nrows


@njit(cache=True)
def dn_closure(p, B, piv, nrows, tgts, coefs, add, mul, start):
    i = start
    cap = B.shape[0]
    while i < nrows:
        v = B[i].copy()
        for a in range(tgts.shape[0]):
            x = apply_action(tgts[a], coefs[a], add, mul, v)
            if nrows >= cap:
                dn_reduce(p, B, piv, nrows, x)
                nz = False
                for k in range(x.shape[0]):
                    if x[k] != 0:
                        nz = True
                        break
                if nz:
                    return -nrows - 1
                continue
            if dn_insert(p, B, piv, nrows, x) >= 0:
                nrows += 1
        i += 1
    return nrows


# ---------------------------------------------------------------------------
# F2 reduced row echelon form, four Russians style
#
# M is uint64[rows, W].  Columns are processed in blocks of 8; for each block
# the pivots are found by ordinary elimination restricted to the block, then
# every other row is cleared with one lookup in a 256-entry table of
# combinations of the block's pivot rows.


@njit(cache=True)
def _bits8(M, r, c0):
    # the 8 bits of row r at columns c0..c0+7 (c0 multiple of 8)
    w = c0 >> 6
    return np.int64((M[r, w] >> np.uint64(c0 & 63)) & np.uint64(255))


@njit(cache=True)
def m4ri_rref(M, ncols):
    """Reduce M in place to reduced echelon form; returns (rank, pivots).

    Row i < rank has pivot column pivots[i], and no other row is nonzero in
    that column.  Rows rank.. end up zero.
    """
    nrows, W = M.shape
    pivots = np.full(min(nrows, ncols), -1, dtype=np.int64)
    rank = 0
    table = np.zeros((256, W), dtype=np.uint64)
    keys = np.zeros(256, dtype=np.int64)
    for c0 in range(0, ncols, 8):
        if rank >= nrows:
            break
        w0 = c0 >> 6
        width = min(8, ncols - c0)
        full = (1 << width) - 1
        pbit = np.zeros(8, dtype=np.int64)
        k = 0
        mask = 0
        r = rank
        while r < nrows and k < width:
            key = _bits8(M, r, c0) & full
            # reduce against the block pivots found so far
            for kk in range(k):
                if key & (1 << pbit[kk]):
                    rr = rank + kk
                    for w in range(w0, W):
                        M[r, w] ^= M[rr, w]
                    key = _bits8(M, r, c0) & full
            if key == 0:
                r += 1
                continue
            b = 0
            while not (key >> b) & 1:
                b += 1
            r1 = rank + k
            if r != r1:
                for w in range(w0, W):
                    t = M[r, w]
                    M[r, w] = M[r1, w]
                    M[r1, w] = t
            for kk in range(k):
                rr = rank + kk
                if _bits8(M, rr, c0) & (1 << b):
                    for w in range(w0, W):
                        M[rr, w] ^= M[r1, w]
            pbit[k] = b
            mask |= 1 << b
            k += 1
            r += 1
        if k == 0:
            continue
        # table[key] = sum of the pivot rows whose pivot bits make up key
        for w in range(w0, W):
            table[0, w] = 0
        nkeys = 1
        for kk in range(k):
            bit = 1 << pbit[kk]
            rr = rank + kk
            for t in range(nkeys):
                src_key = keys[t]
                nk = src_key | bit
                for w in range(w0, W):
                    table[nk, w] = table[src_key, w] ^ M[rr, w]
                keys[nkeys + t] = nk
            nkeys *= 2
        for r in range(nrows):
            if rank <= r < rank + k:
                continue
            key = _bits8(M, r, c0) & mask
            if key != 0:
                for w in range(w0, W):
                    M[r, w] ^= table[key, w]
        for kk in range(k):
            pivots[rank + kk] = c0 + pbit[kk]
        rank += k
    return rank, pivots[:rank]


@njit(cache=True)
def f2_member_sparse(R, pivot_of_col, supports, out_fail, max_fail):
    """Test rows given by their supports (int64[m, s]) against an RREF R.

    pivot_of_col[c] is the row of R with pivot c or -1.  Writes indices of
    non-members into out_fail and returns how many were found (capped).
    """
    m, s = supports.shape
    W = R.shape[1]
    acc = np.zeros(W, dtype=np.uint64)
    nfail = 0
    for i in range(m):
        for w in range(W):
            acc[w] = 0
        for t in range(s):
            c = supports[i, t]
            acc[c >> 6] ^= np.uint64(1) << np.uint64(c & 63)
        for t in range(s):
            c = supports[i, t]
            r = pivot_of_col[c]
            if r >= 0:
                for w in range(W):
                    acc[w] ^= R[r, w]
        nz = False
        for w in range(W):
            if acc[w] != 0:
                nz = True
                break
        if nz:
            if nfail < max_fail:
                out_fail[nfail] = i
            nfail += 1
    return nfail

"""Compiled Todd-Coxeter (HLT with lookahead) over the trivial subgroup."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        nxt = p[c]
        p[c] = r
        c = nxt
    return r


@njit(cache=True)
def _merge(p, queue, qlen, a, b):
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return qlen
    if a > b:
        a, b = b, a
    p[b] = a
    queue[qlen] = b
    return qlen + 1


@njit(cache=True)
def _coincidence(table, inv, p, queue, a, b):
    ncol = table.shape[1]
    qlen = _merge(p, queue, 0, a, b)
    qi = 0
    while qi < qlen:
        e = queue[qi]
        qi += 1
        for x in range(ncol):
            f = table[e, x]
            if f < 0:
                continue
            xi = inv[x]
            if table[f, xi] == e:
                table[f, xi] = -1
            e1 = _rep(p, e)
            f1 = _rep(p, f)
            if table[e1, x] >= 0:
                qlen = _merge(p, queue, qlen, f1, table[e1, x])
            elif table[f1, xi] >= 0:
                qlen = _merge(p, queue, qlen, e1, table[f1, xi])
            else:
                table[e1, x] = f1
                table[f1, xi] = e1
    return 0


@njit(cache=True)
def _scan(table, inv, p, queue, c, rel, rlen, fill, state):
    # state[0] = next free coset index; returns 1 when a definition could not be made
    f = c
    i = 0
    b = c
    j = rlen - 1
    while True:
        while i <= j and table[f, rel[i]] >= 0:
            f = table[f, rel[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(table, inv, p, queue, f, b)
            return 0
        while j >= i and table[b, inv[rel[j]]] >= 0:
            b = table[b, inv[rel[j]]]
            j -= 1
        if j < i:
            _coincidence(table, inv, p, queue, f, b)
            return 0
        if j == i:
            table[f, rel[i]] = b
            table[b, inv[rel[i]]] = f
            return 0
        if not fill:
            return 0
        d = state[0]
        if d >= table.shape[0]:
            return 1
        state[0] = d + 1
        p[d] = d
        table[f, rel[i]] = d
        table[d, inv[rel[i]]] = f


@njit(cache=True)
def enumerate_cosets(rels, rlens, inv, ncol, capacity):
    """Return (table, alive mask, used) for the regular action.

    rels is a 2-D int array of column indices padded per row; rlens the lengths.
    """
    table = np.full((capacity, ncol), -1, dtype=np.int64)
    p = np.arange(capacity, dtype=np.int64)
    queue = np.empty(capacity, dtype=np.int64)
    state = np.zeros(1, dtype=np.int64)
    state[0] = 1
    nrel = rels.shape[0]
    c = 0
    overflow = 0
    while c < state[0]:
        if p[c] == c:
            for r in range(nrel):
                if _scan(table, inv, p, queue, c, rels[r], rlens[r], True, state) == 1:
                    overflow = 1
                    break
                if p[c] != c:
                    break
            if overflow:
                # lookahead: scan every live coset without defining
                for d in range(state[0]):
                    if p[d] == d:
                        for r in range(nrel):
                            _scan(table, inv, p, queue, d, rels[r], rlens[r], False, state)
                            if p[d] != d:
                                break
                live = 0
                for d in range(state[0]):
                    if p[d] == d:
                        live += 1
                if live * 10 > capacity * 9:
                    return table, p, state[0], 1
                # compact in place
                newidx = np.full(state[0], -1, dtype=np.int64)
                k = 0
                for d in range(state[0]):
                    if p[d] == d:
                        newidx[d] = k
                        k += 1
                for d in range(state[0]):
                    if p[d] == d:
                        nd = newidx[d]
                        for x in range(ncol):
                            t = table[d, x]
                            table[nd, x] = newidx[_rep(p, t)] if t >= 0 else -1
                for d in range(k, capacity):
                    for x in range(ncol):
                        table[d, x] = -1
                for d in range(capacity):
                    p[d] = d
                state[0] = k
                c = 0
                overflow = 0
                continue
            if p[c] == c:
                for x in range(ncol):
                    if table[c, x] < 0:
                        d = state[0]
                        if d >= capacity:
                            overflow = 1
                            break
                        state[0] = d + 1
                        table[c, x] = d
                        table[d, inv[x]] = c
                if overflow:
                    continue
        c += 1
    return table, p, state[0], 0


@njit(cache=True)
def bfs_renumber(table, p, used, order_cols):
    """Renumber live cosets by BFS from coset 0 along order_cols (column ids).

    Returns (right action per column in new numbering, parent, parent column).
    """
    ncol = table.shape[1]
    newidx = np.full(used, -1, dtype=np.int64)
    old_of = np.empty(used, dtype=np.int64)
    parent = np.full(used, -1, dtype=np.int64)
    pcol = np.full(used, -1, dtype=np.int64)
    newidx[0] = 0
    old_of[0] = 0
    k = 1
    head = 0
    while head < k:
        c = old_of[head]
        for t in range(order_cols.shape[0]):
            x = order_cols[t]
            d = _rep(p, table[c, x])
            if newidx[d] < 0:
                newidx[d] = k
                old_of[k] = d
                parent[k] = head
                pcol[k] = x
                k += 1
        head += 1
    right = np.empty((ncol, k), dtype=np.int64)
    for e in range(k):
        c = old_of[e]
        for x in range(ncol):
            right[x, e] = newidx[_rep(p, table[c, x])]
    return right, parent[:k], pcol[:k], k

"""Compiled inner loops over GF(q) in the discrete-log domain.

Every kernel here works on *log-encoded* elements: a nonzero field element
w**s is stored as s in [0, q-1), and zero is stored as -1.  Multiplication is
then integer addition mod q-1 and addition goes through the Zech table
``zech[d] = log(1 + w**d)`` (-1 when 1 + w**d = 0).  Negation adds ``half``,
which is (q-1)/2 in odd characteristic and 0 in characteristic 2.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def build_exp_table(p, h, low):
    """Powers of x modulo x**h + low[h-1] x**(h-1) + ... + low[0]."""
    q1 = p**h - 1
    out = np.empty(q1, dtype=np.int64)
    cur = np.zeros(h, dtype=np.int64)
    cur[0] = 1
    for i in range(q1):
        val = 0
        for j in range(h - 1, -1, -1):
            val = val * p + cur[j]
        out[i] = val
        top = cur[h - 1]
        for j in range(h - 1, 0, -1):
            cur[j] = cur[j - 1]
        cur[0] = 0
        if top != 0:
            for j in range(h):
                cur[j] = (cur[j] - top * low[j]) % p
    return out


@njit(cache=True, inline="always")
def add_log(la, lb, zech, q1):
    if la < 0:
        return lb
    if lb < 0:
        return la
    d = lb - la
    if d < 0:
        d += q1
    z = zech[d]
    if z < 0:
        return -1
    r = la + z
    if r >= q1:
        r -= q1
    return r


@njit(cache=True)
def eliminate(m, zech, q1, half, reduced, col_limit):
    """In-place Gaussian elimination on the first ``col_limit`` columns.

    Returns (rank, pivots, swaps).  With ``reduced`` set the result is the
    reduced row echelon form (pivot rows normalised, pivot columns cleared
    above and below); otherwise only the rows below each pivot are cleared
    and pivot rows are left unnormalised so the diagonal product is the
    determinant up to the swap sign.
    """
    rows, cols = m.shape
    ncols = min(cols, col_limit)
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    rank = 0
    swaps = 0
    for c in range(ncols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if m[r, c] >= 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                tmp = m[piv, j]
                m[piv, j] = m[rank, j]
                m[rank, j] = tmp
            swaps += 1
        lp = m[rank, c]
        if reduced and lp != 0:
            for j in range(c, cols):
                x = m[rank, j]
                if x >= 0:
                    x -= lp
                    if x < 0:
                        x += q1
                    m[rank, j] = x
            lp = 0
        start = 0 if reduced else rank + 1
        for r in range(start, rows):
            if r == rank:
                continue
            lf = m[r, c]
            if lf < 0:
                continue
            # row_r -= (f / pivot) * row_rank
            coef = lf - lp + half
            coef %= q1
            for j in range(c, cols):
                lx = m[rank, j]
                if lx < 0:
                    continue
                lt = lx + coef
                if lt >= q1:
                    lt -= q1
                ly = m[r, j]
                if ly < 0:
                    m[r, j] = lt
                    continue
                d = lt - ly
                if d < 0:
                    d += q1
                z = zech[d]
                if z < 0:
                    m[r, j] = -1
                else:
                    z += ly
                    if z >= q1:
                        z -= q1
                    m[r, j] = z
        pivots[rank] = c
        rank += 1
    return rank, pivots[:rank], swaps


@njit(cache=True)
def det_log(m, zech, q1, half):
    """Log of det(m) for a square log-encoded matrix (destroyed), -1 if singular."""
    n = m.shape[0]
    rank, pivots, swaps = eliminate(m, zech, q1, half, False, n)
    if rank < n:
        return -1
    acc = 0
    for i in range(n):
        acc += m[i, i]
    acc += (swaps % 2) * half
    return acc % q1


@njit(cache=True)
def subset_dets(glog, subsets, zech, q1, half):
    """Determinant logs of the column submatrices glog[:, s] for each row s."""
    count, k = subsets.shape
    out = np.empty(count, dtype=np.int64)
    sub = np.empty((k, k), dtype=np.int64)
    for t in range(count):
        for i in range(k):
            for j in range(k):
                sub[i, j] = glog[i, subsets[t, j]]
        out[t] = det_log(sub, zech, q1, half)
    return out


@njit(cache=True)
def vandermonde_dets(alpha_log, v_log, inf_log, subsets, zech, q1, half):
    """Determinant logs of k-column minors of a generalised RS generator.

    Column j < len(alpha_log) is v_j * (1, a_j, ..., a_j**(k-1)); the optional
    column at index len(alpha_log) is (0, ..., 0, inf) and must come last in a
    sorted subset.  The minor is prod(v) * prod_{i<j}(a_j - a_i), times inf
    for the extra column.
    """
    count, k = subsets.shape
    n = alpha_log.shape[0]
    out = np.empty(count, dtype=np.int64)
    for t in range(count):
        acc = 0
        kk = k
        if subsets[t, k - 1] == n:
            if inf_log < 0:
                out[t] = -1
                continue
            acc += inf_log
            kk = k - 1
        ok = True
        for a in range(kk):
            acc += v_log[subsets[t, a]]
            la = alpha_log[subsets[t, a]]
            nla = -1 if la < 0 else (la + half) % q1
            for b in range(a + 1, kk):
                lb = alpha_log[subsets[t, b]]
                diff = add_log(lb, nla, zech, q1)
                if diff < 0:
                    ok = False
                    break
                acc += diff
            if not ok:
                break
            acc %= q1
        out[t] = acc % q1 if ok else -1
    return out


@njit(cache=True)
def derivative_logs(alpha_log, zech, q1, half):
    """Log of prod_{i != j}(a_j - a_i) for each j; -1 if nodes repeat."""
    n = alpha_log.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for j in range(n):
        lj = alpha_log[j]
        acc = 0
        for i in range(n):
            if i == j:
                continue
            li = alpha_log[i]
            nli = -1 if li < 0 else (li + half) % q1
            diff = add_log(lj, nli, zech, q1)
            if diff < 0:
                acc = -1
                break
            acc += diff
            if acc >= q1:
                acc -= q1
        out[j] = acc
    return out

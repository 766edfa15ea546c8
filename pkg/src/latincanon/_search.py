"""Compiled kernels for the branch-and-extend canonical labelling search.

Everything here is zero-based: rows, columns, symbols and labels run over
0..n-1 and ``n`` marks an unlabelled point.  The search state is a handful of
flat arrays so the same kernels serve the Python-level API and the compiled
driver:

``lab``    (3, n)   labels of rows, columns, symbols (alpha, beta, gamma)
``T``      (3, n)   elements in the order they were labelled
``p``      (n + 2,) next free label per cycle length
``pinit``  (n + 2,) value of ``p`` right after seeding
``meta``   (4,)     [curt, c1, unused, unused]
``counters``        instrumentation, see the ``C_*`` indices

In Steiner mode only row 0 of ``lab`` and ``T`` is used (alpha = beta = gamma).
The T-lists double as the undo journal: cycles are labelled contiguously in T
order, so rolling back to an earlier ``curt`` replays them backwards.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_LATIN = 0
MODE_STS = 1
MODE_1F = 2

C_LABEL_CALLS = 0
C_SCANS = 1
C_LEAVES = 2
C_MAX_DEPTH = 3
C_DOUBLING_VIOLATIONS = 4
C_NODES = 5
C_P_VIOLATIONS = 6
C_ALPHA_BETA_VIOLATIONS = 7
N_COUNTERS = 8


@njit(cache=True)
def label_row_cycle_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, s, counters, mode):
    k = ell[s]
    lam = p[k]
    sig = s
    curt = meta[0]
    for _ in range(k):
        lab[2, sig] = lam
        T[2, curt] = sig
        b = rowpos0[i, sig]
        lab[1, b] = lam
        T[1, curt] = b
        if lam == 0:
            meta[1] = b
        a = colpos0[meta[1], sig]
        lab[0, a] = lam
        T[0, curt] = a
        if mode == MODE_1F and a != b:
            counters[C_ALPHA_BETA_VIOLATIONS] += 1
        curt += 1
        sig = g0[j, b]
        lam += 1
    meta[0] = curt
    p[k] += k
    if k > 1 and p[k] > pinit[k - 1]:
        counters[C_P_VIOLATIONS] += 1
    counters[C_LABEL_CALLS] += 1


@njit(cache=True)
def label_inverse_pair_k(g0, rowpos0, i, j, ell, lab, T, p, pinit, meta, s, counters):
    k = ell[s]
    lam = p[k]
    sig = s
    curt = meta[0]
    for _ in range(k):
        lab[0, sig] = lam + k
        T[0, curt] = sig
        b = rowpos0[i, sig]
        lab[0, b] = lam
        T[0, curt + 1] = b
        curt += 2
        sig = g0[j, b]
        lam += 1
    meta[0] = curt
    p[k] += 2 * k
    if k > 1 and p[k] > pinit[k - 1]:
        counters[C_P_VIOLATIONS] += 1
    counters[C_LABEL_CALLS] += 1


@njit(cache=True)
def succ_k(x, y):
    if y <= 1:
        return 1, x + 1
    if x + 1 <= y:
        return x + 1, y
    return x, y - 1


@njit(cache=True)
def succ_prime_k(x, y):
    if x == y:
        return 1, y + 1
    return x + 1, y


@njit(cache=True)
def extend_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, counters, mode):
    n = g0.shape[0]
    curt = meta[0]
    if curt == 0:
        return
    if mode == MODE_STS:
        # the newest inverse pair occupies the last 2*ell entries of T
        x, y = 1, curt - 2 * ell[T[0, curt - 1]] + 1
        while y <= meta[0]:
            s = g0[T[0, x - 1], T[0, y - 1]]
            counters[C_SCANS] += 1
            if lab[0, s] == n:
                label_inverse_pair_k(g0, rowpos0, i, j, ell, lab, T, p, pinit, meta, s, counters)
            x, y = succ_prime_k(x, y)
    else:
        # Walks cells in succ order: shell y is column y top-down, then row y
        # right-to-left.  Labelling a cycle mid-shell only grows meta[0].
        ta = T[0]
        tb = T[1]
        gam = lab[2]
        scans = 0
        y = curt - ell[T[2, curt - 1]] + 1
        while y <= meta[0]:
            cy = tb[y - 1]
            for x in range(y):
                s = g0[ta[x], cy]
                if gam[s] == n:
                    label_row_cycle_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, s, counters, mode)
            ry = ta[y - 1]
            for x in range(y - 2, -1, -1):
                s = g0[ry, tb[x]]
                if gam[s] == n:
                    label_row_cycle_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, s, counters, mode)
            scans += 2 * y - 1
            y += 1
        counters[C_SCANS] += scans


@njit(cache=True)
def undo_k(ell, lab, T, p, meta, to_curt, mode):
    n = lab.shape[1]
    t = to_curt
    curt = meta[0]
    if mode == MODE_STS:
        while t < curt:
            k = ell[T[0, t]]
            p[k] -= 2 * k
            for u in range(t, t + 2 * k):
                lab[0, T[0, u]] = n
                T[0, u] = -1
            t += 2 * k
    else:
        while t < curt:
            k = ell[T[2, t]]
            p[k] -= k
            for u in range(t, t + k):
                for q in range(3):
                    lab[q, T[q, u]] = n
                    T[q, u] = -1
            t += k
    meta[0] = to_curt
    if to_curt == 0:
        meta[1] = -1


@njit(cache=True)
def candidates_k(ell, lab, out, mode):
    """Symbols of the longest unlabelled row cycles, ascending; returns the count."""
    n = lab.shape[1]
    q = 0 if mode == MODE_STS else 2
    longest = 0
    for s in range(n):
        if lab[q, s] == n and ell[s] > longest:
            longest = ell[s]
    m = 0
    for s in range(n):
        if lab[q, s] == n and ell[s] == longest:
            out[m] = s
            m += 1
    return m


@njit(cache=True)
def leaf_k(g0, lab, best, best_lab, have_best, inv_r, inv_c, mode):
    """Compare the completed labelling against the incumbent; keep the smaller.

    Rows of the candidate are produced one at a time, so a candidate that
    loses on an early row costs O(n) rather than O(n^2).
    """
    n = g0.shape[0]
    rq = 0
    cq = 0 if mode == MODE_STS else 1
    sq = 0 if mode == MODE_STS else 2
    for x in range(n):
        inv_r[lab[rq, x]] = x
        inv_c[lab[cq, x]] = x
    state = 0 if have_best[0] else 1
    for R in range(n):
        r = inv_r[R]
        for C in range(n):
            v = lab[sq, g0[r, inv_c[C]]]
            if state == 0:
                if v < best[R, C]:
                    state = 1
                elif v > best[R, C]:
                    return False
            if state == 1:
                best[R, C] = v
    if state == 0:
        return False
    for q in range(3):
        for x in range(n):
            best_lab[q, x] = lab[q, x]
    have_best[0] = 1
    return True


@njit(cache=True)
def branch_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta,
             best, best_lab, have_best, counters, depth_hist, depth0, mode):
    """Explore every extension of the current state; the state is restored on return.

    Returns 0, or -1 if some branch point has no unlabelled cycle.
    """
    n = g0.shape[0]
    levels = n + 1
    cands = np.empty((levels, n), dtype=np.int64)
    ncand = np.zeros(levels, dtype=np.int64)
    idx = np.zeros(levels, dtype=np.int64)
    base = np.zeros(levels, dtype=np.int64)
    inv_r = np.empty(n, dtype=np.int64)
    inv_c = np.empty(n, dtype=np.int64)

    top = 0
    ncand[0] = candidates_k(ell, lab, cands[0], mode)
    if ncand[0] == 0:
        return -1
    base[0] = meta[0]
    counters[C_NODES] += 1
    while top >= 0:
        if idx[top] >= ncand[top]:
            top -= 1
            if top >= 0:
                undo_k(ell, lab, T, p, meta, base[top], mode)
            continue
        s = cands[top, idx[top]]
        idx[top] += 1
        if mode == MODE_STS:
            label_inverse_pair_k(g0, rowpos0, i, j, ell, lab, T, p, pinit, meta, s, counters)
        else:
            label_row_cycle_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, s, counters, mode)
        extend_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta, counters, mode)
        curt = meta[0]
        parent = base[top]
        if parent > 0 and curt < 2 * parent:
            counters[C_DOUBLING_VIOLATIONS] += 1
        if curt < n:
            top += 1
            counters[C_NODES] += 1
            ncand[top] = candidates_k(ell, lab, cands[top], mode)
            if ncand[top] == 0:
                return -1
            idx[top] = 0
            base[top] = curt
        else:
            d = depth0 + top + 1
            counters[C_LEAVES] += 1
            depth_hist[d] += 1
            if d > counters[C_MAX_DEPTH]:
                counters[C_MAX_DEPTH] = d
            leaf_k(g0, lab, best, best_lab, have_best, inv_r, inv_c, mode)
            undo_k(ell, lab, T, p, meta, base[top], mode)
    return 0


@njit(cache=True)
def seed_k(g0, i, j, ell, lab, T, p, pinit, meta, mode):
    """Reset the state for row pair (i, j), pre-label the seeded cycle, fill P."""
    n = g0.shape[0]
    for q in range(3):
        for x in range(n):
            lab[q, x] = n
            T[q, x] = -1
    meta[0] = 0
    meta[1] = -1
    if mode == MODE_1F:
        # the 2-cycle on the unipotent cells becomes (1 2)
        lab[0, i] = 0
        lab[1, i] = 0
        lab[2, g0[i, i]] = 0
        lab[0, j] = 1
        lab[1, j] = 1
        lab[2, g0[i, j]] = 1
        T[0, 0] = i
        T[0, 1] = j
        T[1, 0] = i
        T[1, 1] = j
        T[2, 0] = g0[i, i]
        T[2, 1] = g0[i, j]
        meta[0] = 2
        meta[1] = i
    elif mode == MODE_STS:
        k = g0[i, j]
        lab[0, i] = 0
        lab[0, j] = 1
        lab[0, k] = 2
        T[0, 0] = i
        T[0, 1] = j
        T[0, 2] = k
        meta[0] = 3
    q = 0 if mode == MODE_STS else 2
    cnt = np.zeros(n + 2, dtype=np.int64)
    for s in range(n):
        if lab[q, s] == n:
            cnt[ell[s]] += 1
    offset = meta[0]
    acc = 0
    p[n + 1] = offset
    for k in range(n, 0, -1):
        p[k] = offset + acc
        acc += cnt[k]
    p[0] = offset + acc
    for k in range(n + 2):
        pinit[k] = p[k]


@njit(cache=True)
def canonical_k(g0, rowpos0, colpos0, ell_all, pairs, best, best_lab, counters, depth_hist, mode):
    """Run the search from every pair in ``pairs``; the global minimum lands in ``best``."""
    n = g0.shape[0]
    lab = np.empty((3, n), dtype=np.int64)
    T = np.empty((3, n), dtype=np.int64)
    p = np.zeros(n + 2, dtype=np.int64)
    pinit = np.zeros(n + 2, dtype=np.int64)
    meta = np.zeros(4, dtype=np.int64)
    have_best = np.zeros(1, dtype=np.int64)
    inv_r = np.empty(n, dtype=np.int64)
    inv_c = np.empty(n, dtype=np.int64)
    for q in range(pairs.shape[0]):
        i = pairs[q, 0]
        j = pairs[q, 1]
        ell = ell_all[i, j]
        seed_k(g0, i, j, ell, lab, T, p, pinit, meta, mode)
        if meta[0] >= n:
            counters[C_LEAVES] += 1
            leaf_k(g0, lab, best, best_lab, have_best, inv_r, inv_c, mode)
            continue
        rc = branch_k(g0, rowpos0, colpos0, i, j, ell, lab, T, p, pinit, meta,
                      best, best_lab, have_best, counters, depth_hist, 0, mode)
        if rc != 0:
            return rc
    return 0

"""Hot enumeration kernels, vectorized pure-numpy fallback.

Function-for-function equivalent to the numba backend (same names, same
arguments, bit-identical results); used when numba is unavailable or when
STEPUP_BACKEND=numpy.  Batch sizes are internal and never affect results.
"""

from __future__ import annotations

from itertools import combinations, islice

import numpy as np

from .common import (
    SHAPE_DEC,
    SHAPE_INC,
    SHAPE_PEAK,
    SHAPE_VALLEY_DOWN,
    SHAPE_VALLEY_UP,
    SM_GAMMA,
    SM_MIX1,
    SM_MIX2,
    quad_patterns,
)

U64 = np.uint64
_CHUNK = 1 << 16


def _bitlen(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    out = np.zeros(x.shape, np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        big = x >= (U64(1) << U64(s))
        out[big] += s
        x[big] >>= U64(s)
    out[x >= 1] += 1
    return out


def delta_arr(u, v):
    u = np.asarray(u, np.int64)
    v = np.asarray(v, np.int64)
    return _bitlen(np.bitwise_xor(u, v)) - 1


def delta_consecutive(vs):
    vs = np.asarray(vs, np.int64)
    return delta_arr(vs[:-1], vs[1:])


def _shape_masks(d1, d2, d3):
    lt12 = d1 < d2
    gt12 = d1 > d2
    masks = [None] * 5
    masks[SHAPE_INC] = lt12 & (d2 < d3)
    masks[SHAPE_PEAK] = lt12 & (d2 > d3)
    masks[SHAPE_DEC] = gt12 & (d2 > d3)
    valley = gt12 & (d2 < d3)
    masks[SHAPE_VALLEY_UP] = valley & (d1 < d3)
    masks[SHAPE_VALLEY_DOWN] = valley & (d1 > d3)
    return masks


def _eval_edges_deltas(d1, d2, d3, counts, cons, phi):
    out = np.zeros(d1.shape, np.uint8)
    ds = (d1, d2, d3)
    for sh, mask in enumerate(_shape_masks(d1, d2, d3)):
        nc = int(counts[sh])
        if nc < 0:
            continue
        ok = mask.copy()
        for c in range(nc):
            a, b, col = int(cons[sh, c, 0]), int(cons[sh, c, 1]), int(cons[sh, c, 2])
            ok &= phi[ds[a], ds[b]] == col
        out[ok] = 1
    return out


def eval_edges(quads, counts, cons, phi):
    """Edge decision for each sorted 4-tuple row of `quads`."""
    quads = np.asarray(quads, np.int64)
    d1 = delta_arr(quads[:, 0], quads[:, 1])
    d2 = delta_arr(quads[:, 1], quads[:, 2])
    d3 = delta_arr(quads[:, 2], quads[:, 3])
    return _eval_edges_deltas(d1, d2, d3, counts, cons, phi)


def _rank_rows(rows, cols, binom):
    # colex rank of the 4 columns `cols` of subset rows
    i, j, k, l = cols
    return (
        binom[rows[:, i], 1]
        + binom[rows[:, j], 2]
        + binom[rows[:, k], 3]
        + binom[rows[:, l], 4]
    )


def _scan_subsets_all_edges(N, s, table, binom):
    pats = quad_patterns(s)
    it = combinations(range(N), s)
    while True:
        chunk = list(islice(it, _CHUNK))
        if not chunk:
            return False, np.full(s, -1, np.int64)
        arr = np.array(chunk, np.int64)
        ok = np.ones(len(arr), bool)
        for p in range(pats.shape[0]):
            ok &= table[_rank_rows(arr, pats[p], binom)] == 1
            if not ok.any():
                break
        if ok.any():
            return True, arr[int(np.argmax(ok))].copy()


def scan_cliques6_table(N, table, binom):
    """Lexicographically first 6-subset of [0,N) spanning all 15 edges."""
    return _scan_subsets_all_edges(N, 6, table, binom)


def scan_cliques_table(N, s, table, binom):
    return _scan_subsets_all_edges(N, s, table, binom)


def _mix64(z):
    z = (z ^ (z >> U64(30))) * SM_MIX1
    z = (z ^ (z >> U64(27))) * SM_MIX2
    return z ^ (z >> U64(31))


def _hash3(seed, a, b):
    x = _mix64(seed + a * SM_GAMMA)
    return _mix64(x + b * SM_MIX1)


def _sample6_block(seed, lo, hi, D):
    """Rows lo..hi-1 of the counter-based 6-subset stream, sorted."""
    mask = U64((1 << D) - 1)
    n = hi - lo
    idx = np.arange(lo, hi, dtype=np.uint64)
    att = np.zeros(n, np.uint64)
    vs = np.empty((n, 6), np.int64)
    pending = np.arange(n)
    while pending.size:
        for j in range(6):
            h = _hash3(U64(seed), idx[pending], U64(j) + U64(16) * att[pending])
            vs[pending, j] = (h & mask).astype(np.int64)
        vs[pending] = np.sort(vs[pending], axis=1)
        dup = (np.diff(vs[pending], axis=1) == 0).any(axis=1)
        att[pending[dup]] += U64(1)
        pending = pending[dup]
    return vs


def _clique6_rows(vs, counts, cons, phi):
    e = delta_arr(vs[:, :-1].ravel(), vs[:, 1:].ravel()).reshape(-1, 5)
    # pair delta (i,j) = max of consecutive deltas e[i..j-1]
    pmax = {}
    for i in range(5):
        m = e[:, i].copy()
        pmax[(i, i + 1)] = m
        for j in range(i + 2, 6):
            m = np.maximum(m, e[:, j - 1])
            pmax[(i, j)] = m.copy()
    ok = np.ones(len(vs), bool)
    for (i, j, k, l) in quad_patterns(6):
        d1, d2, d3 = pmax[(i, j)], pmax[(j, k)], pmax[(k, l)]
        ok &= _eval_edges_deltas(d1, d2, d3, counts, cons, phi) == 1
        if not ok.any():
            break
    return ok


def count_cliques6_sampled(D, n_samples, seed, counts, cons, phi):
    total = 0
    for lo in range(0, n_samples, _CHUNK):
        hi = min(lo + _CHUNK, n_samples)
        vs = _sample6_block(seed, lo, hi, D)
        total += int(_clique6_rows(vs, counts, cons, phi).sum())
    return total


def first_clique6_sampled(D, n_samples, seed, counts, cons, phi):
    for lo in range(0, n_samples, _CHUNK):
        hi = min(lo + _CHUNK, n_samples)
        vs = _sample6_block(seed, lo, hi, D)
        ok = _clique6_rows(vs, counts, cons, phi)
        if ok.any():
            r = int(np.argmax(ok))
            return lo + r, vs[r].copy()
    return -1, np.full(6, -1, np.int64)


def _good_rows(subsets, r, cons_pat, phi):
    """Boolean per row: contains an increasing r-tuple matching the template."""
    m, n = subsets.shape
    good = np.zeros(m, bool)
    for combo in combinations(range(n), r):
        alive = ~good
        if not alive.any():
            break
        rows = subsets[alive]
        ok = np.ones(len(rows), bool)
        for c in range(cons_pat.shape[0]):
            i = rows[:, combo[cons_pat[c, 0]]]
            j = rows[:, combo[cons_pat[c, 1]]]
            ok &= phi[i, j] == cons_pat[c, 2]
        good[np.flatnonzero(alive)[ok]] = True
    return good


def first_good_tuple(A, r, cons_pat, phi):
    A = np.asarray(A, np.int64)
    out = np.full(r, -1, np.int64)
    if A.size < r:
        return False, out
    for combo in combinations(range(A.size), r):
        ok = True
        for c in range(cons_pat.shape[0]):
            i = A[combo[cons_pat[c, 0]]]
            j = A[combo[cons_pat[c, 1]]]
            if phi[i, j] != cons_pat[c, 2]:
                ok = False
                break
        if ok:
            return True, A[list(combo)].copy()
    return False, out


def _bad_scan(row_iter, n, r, cons_pat, phi, early_stop):
    checked = 0
    bad = 0
    first_bad = np.full(n, -1, np.int64)
    for chunk in row_iter:
        arr = np.array(chunk, np.int64).reshape(-1, n)
        good = _good_rows(arr, r, cons_pat, phi)
        checked += len(arr)
        nb = int((~good).sum())
        if nb:
            if bad == 0:
                first_bad = arr[int(np.argmax(~good))].copy()
            bad += nb
            if early_stop:
                # rewind: only rows up to the first bad one count as checked
                first_local = int(np.argmax(~good))
                checked += first_local + 1 - len(arr)
                return checked, 1, first_bad
    return checked, bad, first_bad


def _chunks(it, size):
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def bad_nsubsets_exhaustive(D, n, r, cons_pat, phi, early_stop):
    it = combinations(range(D), n)
    return _bad_scan(_chunks(it, _CHUNK), n, r, cons_pat, phi, early_stop)


def bad_nsubsets_given(subsets, r, cons_pat, phi, early_stop):
    subsets = np.asarray(subsets, np.int64)
    n = subsets.shape[1]
    blocks = (subsets[i : i + _CHUNK] for i in range(0, len(subsets), _CHUNK))
    return _bad_scan(blocks, n, r, cons_pat, phi, early_stop)


def _subset5_counts_table(rows, table, binom):
    counts = np.zeros(len(rows), np.int64)
    for pat in quad_patterns(5):
        counts += table[_rank_rows(rows, pat, binom)]
    return counts


def first_pattern_subset_table(S, t, table, binom):
    S = np.asarray(S, np.int64)
    if S.size < 5:
        return False, np.full(5, -1, np.int64)
    it = combinations(S.tolist(), 5)
    for chunk in _chunks(it, _CHUNK):
        rows = np.array(chunk, np.int64)
        counts = _subset5_counts_table(rows, table, binom)
        hit = counts >= t
        if hit.any():
            return True, rows[int(np.argmax(hit))].copy()
    return False, np.full(5, -1, np.int64)


def first_pattern_subset_oracle(S, t, counts, cons, phi):
    S = np.asarray(S, np.int64)
    if S.size < 5:
        return False, np.full(5, -1, np.int64)
    it = combinations(S.tolist(), 5)
    for chunk in _chunks(it, _CHUNK):
        rows = np.array(chunk, np.int64)
        e = delta_arr(rows[:, :-1].ravel(), rows[:, 1:].ravel()).reshape(-1, 4)
        pmax = {}
        for i in range(4):
            m = e[:, i].copy()
            pmax[(i, i + 1)] = m
            for j in range(i + 2, 5):
                m = np.maximum(m, e[:, j - 1])
                pmax[(i, j)] = m.copy()
        total = np.zeros(len(rows), np.int64)
        for (i, j, k, l) in quad_patterns(5):
            d1, d2, d3 = pmax[(i, j)], pmax[(j, k)], pmax[(k, l)]
            total += _eval_edges_deltas(d1, d2, d3, counts, cons, phi)
        hit = total >= t
        if hit.any():
            return True, rows[int(np.argmax(hit))].copy()
    return False, np.full(5, -1, np.int64)


def conflict_subsets_table(N, z, thresh, table, binom):
    """All z-subsets of [0,N) spanning >= thresh edges, as an (m, z) array."""
    pats = quad_patterns(z)
    hits = []
    it = combinations(range(N), z)
    for chunk in _chunks(it, _CHUNK):
        rows = np.array(chunk, np.int64)
        counts = np.zeros(len(rows), np.int64)
        for p in range(pats.shape[0]):
            counts += table[_rank_rows(rows, pats[p], binom)]
        sel = rows[counts >= thresh]
        if len(sel):
            hits.append(sel)
    if not hits:
        return np.empty((0, z), np.int64)
    return np.vstack(hits)


def greedy_conflict_free(N, cs, vert_off, vert_cs, order):
    n_cs, size = cs.shape
    cnt = np.zeros(n_cs, np.int32)
    mask = np.zeros(N, np.int8)
    for p in range(N):
        v = int(order[p])
        inc = vert_cs[vert_off[v] : vert_off[v + 1]]
        if not (cnt[inc] == size - 1).any():
            mask[v] = 1
            cnt[inc] += 1
    return mask


def alpha_bb(N, cs, vert_off, vert_cs, order, seed_mask, node_budget):
    """Exact maximum conflict-free subset; mirrors the numba DFS exactly."""
    n_cs, size = cs.shape
    cnt = np.zeros(n_cs, np.int32)
    state = np.zeros(N, np.int8)
    best = int(seed_mask.sum())
    best_mask = seed_mask.astype(np.int8).copy()
    cur = np.zeros(N, np.int8)
    chosen = 0
    nodes = 0
    completed = True
    trail: list[int] = []

    st = [(0, 0, 0)]  # pos, phase, trail_lo
    while st:
        pos, phase, trail_lo = st[-1]
        if phase == 0:
            nodes += 1
            if nodes > node_budget:
                completed = False
                break
            while pos < N and state[order[pos]] != 0:
                pos += 1
            if pos == N:
                if chosen > best:
                    best = chosen
                    best_mask = cur.copy()
                st.pop()
                continue
            avail = int((state[order[pos:]] == 0).sum())
            if chosen + avail <= best:
                st.pop()
                continue
            v = int(order[pos])
            st[-1] = (pos, 1, len(trail))
            state[v] = 1
            cur[v] = 1
            chosen += 1
            inc = vert_cs[vert_off[v] : vert_off[v + 1]]
            cnt[inc] += 1  # each conflict set contains v once
            for t in inc[cnt[inc] == size - 1]:
                for u in cs[t]:
                    if state[u] == 0:
                        state[u] = 2
                        trail.append(int(u))
            st.append((pos + 1, 0, len(trail)))
        elif phase == 1:
            v = int(order[pos])
            while len(trail) > trail_lo:
                state[trail.pop()] = 0
            cnt[vert_cs[vert_off[v] : vert_off[v + 1]]] -= 1
            state[v] = 2
            cur[v] = 0
            chosen -= 1
            st[-1] = (pos, 2, trail_lo)
            st.append((pos + 1, 0, len(trail)))
        else:
            state[int(order[pos])] = 0
            st.pop()
    return best, best_mask, nodes, completed

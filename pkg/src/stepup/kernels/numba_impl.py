"""Hot enumeration kernels, numba @njit backend.

All functions are deterministic: enumeration is lexicographic, sampling is
counter-based (stateless hash of (seed, sample index)), and parallel merges
pick the lexicographically first witness, so results do not depend on the
thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from .common import (
    SHAPE_DEC,
    SHAPE_INC,
    SHAPE_PEAK,
    SHAPE_VALLEY_DOWN,
    SHAPE_VALLEY_UP,
    SM_GAMMA,
    SM_MIX1,
    SM_MIX2,
)

U64 = np.uint64


@njit(inline="always")
def _delta(u, v):
    # highest bit where u and v differ; u != v
    x = u ^ v
    d = -1
    if x >= 1 << 32:
        x >>= 32
        d += 32
    if x >= 1 << 16:
        x >>= 16
        d += 16
    if x >= 1 << 8:
        x >>= 8
        d += 8
    if x >= 1 << 4:
        x >>= 4
        d += 4
    if x >= 1 << 2:
        x >>= 2
        d += 2
    if x >= 2:
        x >>= 1
        d += 1
    if x >= 1:
        d += 1
    return d


@njit(cache=True)
def delta_arr(u, v):
    out = np.empty(u.size, np.int64)
    for i in range(u.size):
        out[i] = _delta(u[i], v[i])
    return out


@njit(cache=True)
def delta_consecutive(vs):
    out = np.empty(vs.size - 1, np.int64)
    for i in range(vs.size - 1):
        out[i] = _delta(vs[i], vs[i + 1])
    return out


@njit(inline="always")
def _shape(d1, d2, d3):
    if d1 < d2:
        if d2 < d3:
            return SHAPE_INC
        return SHAPE_PEAK
    if d2 > d3:
        return SHAPE_DEC
    if d1 < d3:
        return SHAPE_VALLEY_UP
    if d1 > d3:
        return SHAPE_VALLEY_DOWN
    return -1  # d1 == d3 valley: matches no shape, never an edge


@njit(inline="always")
def _edge_eval(d1, d2, d3, counts, cons, phi):
    sh = _shape(d1, d2, d3)
    if sh < 0:
        return False
    nc = counts[sh]
    if nc < 0:
        return False
    for c in range(nc):
        a = cons[sh, c, 0]
        b = cons[sh, c, 1]
        da = d1 if a == 0 else (d2 if a == 1 else d3)
        db = d1 if b == 0 else (d2 if b == 1 else d3)
        if phi[da, db] != cons[sh, c, 2]:
            return False
    return True


@njit(cache=True)
def eval_edges(quads, counts, cons, phi):
    """Edge decision for each sorted 4-tuple row of `quads`."""
    n = quads.shape[0]
    out = np.zeros(n, np.uint8)
    for i in range(n):
        d1 = _delta(quads[i, 0], quads[i, 1])
        d2 = _delta(quads[i, 1], quads[i, 2])
        d3 = _delta(quads[i, 2], quads[i, 3])
        if _edge_eval(d1, d2, d3, counts, cons, phi):
            out[i] = 1
    return out


@njit(inline="always")
def _rank4(a, b, c, d, binom):
    return binom[a, 1] + binom[b, 2] + binom[c, 3] + binom[d, 4]


@njit(cache=True, parallel=True)
def scan_cliques6_table(N, table, binom):
    """Lexicographically first 6-subset of [0,N) spanning all 15 edges.

    Returns (found, witness[6]).  Partitioned over the first vertex; the merge
    takes the smallest first vertex, so the result is thread-count invariant.
    """
    hit = np.zeros(N, np.int64)
    wit = np.full((N, 6), -1, np.int64)
    for v1 in prange(N - 5):
        done = False
        for v2 in range(v1 + 1, N - 4):
            if done:
                break
            for v3 in range(v2 + 1, N - 3):
                if done:
                    break
                for v4 in range(v3 + 1, N - 2):
                    if done:
                        break
                    if table[_rank4(v1, v2, v3, v4, binom)] == 0:
                        continue
                    for v5 in range(v4 + 1, N - 1):
                        if done:
                            break
                        if (
                            table[_rank4(v1, v2, v3, v5, binom)] == 0
                            or table[_rank4(v1, v2, v4, v5, binom)] == 0
                            or table[_rank4(v1, v3, v4, v5, binom)] == 0
                            or table[_rank4(v2, v3, v4, v5, binom)] == 0
                        ):
                            continue
                        for v6 in range(v5 + 1, N):
                            if (
                                table[_rank4(v1, v2, v3, v6, binom)] == 1
                                and table[_rank4(v1, v2, v4, v6, binom)] == 1
                                and table[_rank4(v1, v3, v4, v6, binom)] == 1
                                and table[_rank4(v2, v3, v4, v6, binom)] == 1
                                and table[_rank4(v1, v2, v5, v6, binom)] == 1
                                and table[_rank4(v1, v3, v5, v6, binom)] == 1
                                and table[_rank4(v2, v3, v5, v6, binom)] == 1
                                and table[_rank4(v1, v4, v5, v6, binom)] == 1
                                and table[_rank4(v2, v4, v5, v6, binom)] == 1
                                and table[_rank4(v3, v4, v5, v6, binom)] == 1
                            ):
                                hit[v1] = 1
                                wit[v1, 0] = v1
                                wit[v1, 1] = v2
                                wit[v1, 2] = v3
                                wit[v1, 3] = v4
                                wit[v1, 4] = v5
                                wit[v1, 5] = v6
                                done = True
                                break
    for v1 in range(N):
        if hit[v1]:
            return True, wit[v1]
    return False, wit[0]


@njit(cache=True)
def scan_cliques_table(N, s, table, binom):
    """Generic-s variant: first s-subset spanning all C(s,4) edges."""
    idx = np.empty(s, np.int64)
    witness = np.full(s, -1, np.int64)
    pos = 0
    idx[0] = -1
    while pos >= 0:
        idx[pos] += 1
        if idx[pos] > N - s + pos:
            pos -= 1
            continue
        ok = True
        if pos >= 3:
            d = idx[pos]
            for i in range(pos - 2):
                for j in range(i + 1, pos - 1):
                    for l in range(j + 1, pos):
                        if table[_rank4(idx[i], idx[j], idx[l], d, binom)] == 0:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
        if not ok:
            continue
        if pos == s - 1:
            for q in range(s):
                witness[q] = idx[q]
            return True, witness
        pos += 1
        idx[pos] = idx[pos - 1]
    return False, witness


@njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> U64(30))) * SM_MIX1
    z = (z ^ (z >> U64(27))) * SM_MIX2
    return z ^ (z >> U64(31))


@njit(inline="always")
def _hash3(seed, a, b):
    x = _mix64(seed + a * SM_GAMMA)
    return _mix64(x + b * SM_MIX1)


@njit(inline="always")
def _sample6(seed, i, mask, out):
    # deterministic distinct sorted 6-subset of [0, mask]; counter-based
    att = U64(0)
    while True:
        for j in range(6):
            out[j] = np.int64(_hash3(seed, U64(i), U64(j) + U64(16) * att) & mask)
        for a in range(1, 6):
            key = out[a]
            b = a - 1
            while b >= 0 and out[b] > key:
                out[b + 1] = out[b]
                b -= 1
            out[b + 1] = key
        distinct = True
        for a in range(5):
            if out[a] == out[a + 1]:
                distinct = False
                break
        if distinct:
            return
        att += U64(1)


@njit(inline="always")
def _is_clique6_oracle(vs, e, counts, cons, phi):
    # vs sorted distinct; pair deltas are range maxima of consecutive deltas
    for i in range(5):
        e[i] = _delta(vs[i], vs[i + 1])
    for i in range(3):
        for j in range(i + 1, 4):
            for k in range(j + 1, 5):
                for l in range(k + 1, 6):
                    d1 = e[i]
                    for x in range(i + 1, j):
                        if e[x] > d1:
                            d1 = e[x]
                    d2 = e[j]
                    for x in range(j + 1, k):
                        if e[x] > d2:
                            d2 = e[x]
                    d3 = e[k]
                    for x in range(k + 1, l):
                        if e[x] > d3:
                            d3 = e[x]
                    if not _edge_eval(d1, d2, d3, counts, cons, phi):
                        return False
    return True


@njit(cache=True, parallel=True)
def count_cliques6_sampled(D, n_samples, seed, counts, cons, phi):
    """Number of sampled 6-subsets of [0, 2^D) spanning all 15 edges."""
    mask = U64((1 << D) - 1)
    n_chunks = 2048
    chunk = (n_samples + n_chunks - 1) // n_chunks
    subtotals = np.zeros(n_chunks, np.int64)
    for c in prange(n_chunks):
        vs = np.empty(6, np.int64)
        e = np.empty(5, np.int64)
        lo = c * chunk
        hi = min(lo + chunk, n_samples)
        t = 0
        for i in range(lo, hi):
            _sample6(U64(seed), i, mask, vs)
            if _is_clique6_oracle(vs, e, counts, cons, phi):
                t += 1
        subtotals[c] = t
    return int(subtotals.sum())


@njit(cache=True)
def first_clique6_sampled(D, n_samples, seed, counts, cons, phi):
    """Serial rescan: (sample index, witness) of the first sampled clique."""
    mask = U64((1 << D) - 1)
    vs = np.empty(6, np.int64)
    e = np.empty(5, np.int64)
    for i in range(n_samples):
        _sample6(U64(seed), i, mask, vs)
        if _is_clique6_oracle(vs, e, counts, cons, phi):
            return i, vs
    return -1, vs


@njit(inline="always")
def _good_tuple_at(A, combo, cons_pat, phi):
    for c in range(cons_pat.shape[0]):
        i = A[combo[cons_pat[c, 0]]]
        j = A[combo[cons_pat[c, 1]]]
        if phi[i, j] != cons_pat[c, 2]:
            return False
    return True


@njit(cache=True)
def first_good_tuple(A, r, cons_pat, phi):
    """Lexicographically first increasing r-tuple of A matching the
    constraint template, or found=False."""
    n = A.size
    out = np.full(r, -1, np.int64)
    if n < r:
        return False, out
    combo = np.empty(r, np.int64)
    pos = 0
    combo[0] = -1
    while pos >= 0:
        combo[pos] += 1
        if combo[pos] > n - r + pos:
            pos -= 1
            continue
        if pos == r - 1:
            if _good_tuple_at(A, combo, cons_pat, phi):
                for q in range(r):
                    out[q] = A[combo[q]]
                return True, out
        else:
            pos += 1
            combo[pos] = combo[pos - 1]
    return False, out


@njit(inline="always")
def _has_good_tuple(A, n, r, combo, cons_pat, phi):
    pos = 0
    combo[0] = -1
    while pos >= 0:
        combo[pos] += 1
        if combo[pos] > n - r + pos:
            pos -= 1
            continue
        if pos == r - 1:
            if _good_tuple_at(A, combo, cons_pat, phi):
                return True
        else:
            pos += 1
            combo[pos] = combo[pos - 1]
    return False


@njit(cache=True)
def bad_nsubsets_exhaustive(D, n, r, cons_pat, phi, early_stop):
    """Scan all n-subsets of [0, D); a subset is bad when it contains no good
    r-tuple.  Returns (subsets checked, bad count, first bad subset or -1s)."""
    first_bad = np.full(n, -1, np.int64)
    idx = np.empty(n, np.int64)
    combo = np.empty(r, np.int64)
    checked = 0
    bad = 0
    pos = 0
    idx[0] = -1
    while pos >= 0:
        idx[pos] += 1
        if idx[pos] > D - n + pos:
            pos -= 1
            continue
        if pos == n - 1:
            checked += 1
            if not _has_good_tuple(idx, n, r, combo, cons_pat, phi):
                bad += 1
                if bad == 1:
                    for q in range(n):
                        first_bad[q] = idx[q]
                if early_stop:
                    return checked, bad, first_bad
        else:
            pos += 1
            idx[pos] = idx[pos - 1]
    return checked, bad, first_bad


@njit(cache=True)
def bad_nsubsets_given(subsets, r, cons_pat, phi, early_stop):
    """Same as bad_nsubsets_exhaustive over explicit subset rows."""
    m, n = subsets.shape
    first_bad = np.full(n, -1, np.int64)
    combo = np.empty(r, np.int64)
    checked = 0
    bad = 0
    for srow in range(m):
        checked += 1
        A = subsets[srow]
        if not _has_good_tuple(A, n, r, combo, cons_pat, phi):
            bad += 1
            if bad == 1:
                for q in range(n):
                    first_bad[q] = A[q]
            if early_stop:
                return checked, bad, first_bad
    return checked, bad, first_bad


@njit(cache=True)
def first_pattern_subset_table(S, t, table, binom):
    """First 5-subset of sorted S spanning >= t edges (edge table lookup)."""
    n = S.size
    wit = np.full(5, -1, np.int64)
    if n < 5:
        return False, wit
    for a in range(n - 4):
        for b in range(a + 1, n - 3):
            for c in range(b + 1, n - 2):
                for d in range(c + 1, n - 1):
                    for f in range(d + 1, n):
                        cnt = table[_rank4(S[a], S[b], S[c], S[d], binom)]
                        cnt += table[_rank4(S[a], S[b], S[c], S[f], binom)]
                        cnt += table[_rank4(S[a], S[b], S[d], S[f], binom)]
                        cnt += table[_rank4(S[a], S[c], S[d], S[f], binom)]
                        cnt += table[_rank4(S[b], S[c], S[d], S[f], binom)]
                        if cnt >= t:
                            wit[0] = S[a]
                            wit[1] = S[b]
                            wit[2] = S[c]
                            wit[3] = S[d]
                            wit[4] = S[f]
                            return True, wit
    return False, wit


@njit(inline="always")
def _edge_oracle_sorted4(a, b, c, d, counts, cons, phi):
    return _edge_eval(_delta(a, b), _delta(b, c), _delta(c, d), counts, cons, phi)


@njit(cache=True)
def first_pattern_subset_oracle(S, t, counts, cons, phi):
    """First 5-subset of sorted S spanning >= t rule-set edges (no table)."""
    n = S.size
    wit = np.full(5, -1, np.int64)
    if n < 5:
        return False, wit
    for a in range(n - 4):
        for b in range(a + 1, n - 3):
            for c in range(b + 1, n - 2):
                for d in range(c + 1, n - 1):
                    for f in range(d + 1, n):
                        cnt = 0
                        if _edge_oracle_sorted4(S[a], S[b], S[c], S[d], counts, cons, phi):
                            cnt += 1
                        if _edge_oracle_sorted4(S[a], S[b], S[c], S[f], counts, cons, phi):
                            cnt += 1
                        if cnt < t and _edge_oracle_sorted4(
                            S[a], S[b], S[d], S[f], counts, cons, phi
                        ):
                            cnt += 1
                        if cnt < t and _edge_oracle_sorted4(
                            S[a], S[c], S[d], S[f], counts, cons, phi
                        ):
                            cnt += 1
                        if cnt < t and _edge_oracle_sorted4(
                            S[b], S[c], S[d], S[f], counts, cons, phi
                        ):
                            cnt += 1
                        if cnt >= t:
                            wit[0] = S[a]
                            wit[1] = S[b]
                            wit[2] = S[c]
                            wit[3] = S[d]
                            wit[4] = S[f]
                            return True, wit
    return False, wit


@njit(cache=True)
def _conflicts_pass(N, z, thresh, table, binom, out, do_fill):
    idx = np.empty(z, np.int64)
    found = 0
    pos = 0
    idx[0] = -1
    while pos >= 0:
        idx[pos] += 1
        if idx[pos] > N - z + pos:
            pos -= 1
            continue
        if pos == z - 1:
            cnt = 0
            done = False
            for i in range(z - 3):
                for j in range(i + 1, z - 2):
                    for k in range(j + 1, z - 1):
                        for l in range(k + 1, z):
                            if table[_rank4(idx[i], idx[j], idx[k], idx[l], binom)]:
                                cnt += 1
                                if cnt >= thresh:
                                    done = True
                                    break
                        if done:
                            break
                    if done:
                        break
                if done:
                    break
            if cnt >= thresh:
                if do_fill:
                    for q in range(z):
                        out[found, q] = idx[q]
                found += 1
        else:
            pos += 1
            idx[pos] = idx[pos - 1]
    return found


@njit(cache=True)
def conflict_subsets_table(N, z, thresh, table, binom):
    """All z-subsets of [0,N) spanning >= thresh edges, as an (m, z) array."""
    dummy = np.empty((0, z), np.int64)
    n_conf = _conflicts_pass(N, z, thresh, table, binom, dummy, False)
    out = np.empty((n_conf, z), np.int64)
    if n_conf > 0:
        _conflicts_pass(N, z, thresh, table, binom, out, True)
    return out


@njit(cache=True)
def greedy_conflict_free(N, cs, vert_off, vert_cs, order):
    """Greedy seed: add vertices in order unless completing a conflict set."""
    n_cs, size = cs.shape
    cnt = np.zeros(n_cs, np.int32)
    mask = np.zeros(N, np.int8)
    for p in range(N):
        v = order[p]
        ok = True
        for q in range(vert_off[v], vert_off[v + 1]):
            if cnt[vert_cs[q]] == size - 1:
                ok = False
                break
        if ok:
            mask[v] = 1
            for q in range(vert_off[v], vert_off[v + 1]):
                cnt[vert_cs[q]] += 1
    return mask


@njit(cache=True)
def alpha_bb(N, cs, vert_off, vert_cs, order, seed_mask, node_budget):
    """Exact maximum conflict-free subset by include/exclude DFS.

    cs rows are the forbidden subsets; a chosen set is valid iff it fully
    contains none of them.  Once size-1 vertices of a conflict set are chosen
    its last vertex is barred (undone on backtrack).  Returns
    (alpha, chosen mask, nodes, completed flag).
    """
    n_cs, size = cs.shape
    cnt = np.zeros(n_cs, np.int32)
    state = np.zeros(N, np.int8)  # 0 undecided, 1 chosen, 2 excluded
    best = 0
    best_mask = np.zeros(N, np.int8)
    for v in range(N):
        if seed_mask[v]:
            best += 1
            best_mask[v] = 1

    st_pos = np.empty(N + 2, np.int64)
    st_phase = np.empty(N + 2, np.int8)  # 0 fresh, 1 undo-include/exclude, 2 unwind
    st_trail_lo = np.empty(N + 2, np.int64)
    trail = np.empty(N * (N + 2), np.int64)
    trail_top = 0
    chosen = 0
    cur = np.zeros(N, np.int8)
    nodes = 0
    completed = True

    top = 0
    st_pos[0] = 0
    st_phase[0] = 0
    st_trail_lo[0] = 0
    while top >= 0:
        pos = st_pos[top]
        phase = st_phase[top]
        if phase == 0:
            nodes += 1
            if nodes > node_budget:
                completed = False
                break
            while pos < N and state[order[pos]] != 0:
                pos += 1
            st_pos[top] = pos
            if pos == N:
                if chosen > best:
                    best = chosen
                    for v in range(N):
                        best_mask[v] = cur[v]
                top -= 1
                continue
            avail = 0
            for p in range(pos, N):
                if state[order[p]] == 0:
                    avail += 1
            if chosen + avail <= best:
                top -= 1
                continue
            v = order[pos]
            st_phase[top] = 1
            st_trail_lo[top] = trail_top
            state[v] = 1
            cur[v] = 1
            chosen += 1
            for q in range(vert_off[v], vert_off[v + 1]):
                t = vert_cs[q]
                cnt[t] += 1
                if cnt[t] == size - 1:
                    for m in range(size):
                        u = cs[t, m]
                        if state[u] == 0:
                            state[u] = 2
                            trail[trail_top] = u
                            trail_top += 1
            top += 1
            st_pos[top] = pos + 1
            st_phase[top] = 0
        elif phase == 1:
            v = order[pos]
            while trail_top > st_trail_lo[top]:
                trail_top -= 1
                state[trail[trail_top]] = 0
            for q in range(vert_off[v], vert_off[v + 1]):
                cnt[vert_cs[q]] -= 1
            state[v] = 2
            cur[v] = 0
            chosen -= 1
            st_phase[top] = 2
            top += 1
            st_pos[top] = pos + 1
            st_phase[top] = 0
        else:
            v = order[pos]
            state[v] = 0
            top -= 1
    return best, best_mask, nodes, completed

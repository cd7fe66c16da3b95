#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends (numba @njit vs the pure-numpy
fallback) over representative workloads.  Run from the repository root:

    python benchmarks/bench_kernels.py [--quick]

The numba backend is warmed (and its cache populated) before timing.
"""

import argparse
import time

import numpy as np

from stepup.colorings import pattern_lemma41, random_coloring
from stepup.constructions import rules_section3, rules_section4
from stepup.kernels import all_combinations, binomial_table, get_impl


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def build_workloads(quick: bool):
    rng = np.random.default_rng(0)
    phi6 = random_coloring(6, 1)
    phi10 = random_coloring(10, 2)
    c3, k3 = rules_section3().compiled()
    c4, k4 = rules_section4().compiled()
    binom = binomial_table(64, 6)

    n_quads = 200_000 if quick else 1_000_000
    quads = np.sort(rng.integers(0, 1 << 10, size=(n_quads, 4)), axis=1)
    quads = quads[(np.diff(quads, axis=1) > 0).all(axis=1)].astype(np.int64)

    quads64 = all_combinations(64, 4)
    table = get_impl("numba").eval_edges(quads64, c3, k3, phi6.matrix)
    by_rank = np.zeros(len(quads64), np.uint8)
    r = (
        binom[quads64[:, 0], 1] + binom[quads64[:, 1], 2]
        + binom[quads64[:, 2], 3] + binom[quads64[:, 3], 4]
    )
    by_rank[r] = table

    n_samples = 10**5 if quick else 10**6
    pat = pattern_lemma41().constraint_array()

    cs = get_impl("numba").conflict_subsets_table(32, 5, 2, _table32(phi_seed=3), binomial_table(32, 6))

    workloads = [
        ("edge eval, %dk sorted 4-tuples" % (len(quads) // 1000),
         lambda impl: impl.eval_edges(quads, c4, k4, phi10.matrix)),
        ("exhaustive 6-clique scan, 64 vertices (C(64,6)=75M)",
         lambda impl: impl.scan_cliques6_table(64, by_rank, binom)),
        ("sampled 6-clique scan, %dk samples at D=10" % (n_samples // 1000),
         lambda impl: impl.count_cliques6_sampled(
             10, n_samples, np.uint64(5), c3, k3, phi10.matrix)),
        ("universal template scan, all C(10,5) subsets x 100 colorings",
         lambda impl: [
             impl.bad_nsubsets_exhaustive(10, 5, 4, pat,
                                          random_coloring(10, s).matrix, False)
             for s in range(100)
         ]),
        ("exact independence, 32 vertices, %d forbidden 5-sets" % len(cs),
         lambda impl: _alpha(impl, cs)),
    ]
    return workloads


def _table32(phi_seed):
    phi = random_coloring(5, phi_seed)
    c4, k4 = rules_section4().compiled()
    quads = all_combinations(32, 4)
    binom = binomial_table(32, 6)
    vals = get_impl("numba").eval_edges(quads, c4, k4, phi.matrix)
    by_rank = np.zeros(len(quads), np.uint8)
    r = (
        binom[quads[:, 0], 1] + binom[quads[:, 1], 2]
        + binom[quads[:, 2], 3] + binom[quads[:, 3], 4]
    )
    by_rank[r] = vals
    return by_rank


def _alpha(impl, cs):
    N = 32
    deg = np.zeros(N, np.int64)
    for row in cs:
        deg[row] += 1
    order = np.argsort(-deg, kind="stable").astype(np.int64)
    vert_off = np.zeros(N + 1, np.int64)
    np.cumsum(deg, out=vert_off[1:])
    vert_cs = np.empty(int(deg.sum()), np.int64)
    fill = vert_off[:-1].copy()
    for ci, row in enumerate(cs):
        for v in row:
            vert_cs[fill[v]] = ci
            fill[v] += 1
    seed = impl.greedy_conflict_free(N, cs, vert_off, vert_cs, order)
    return impl.alpha_bb(N, cs, vert_off, vert_cs, order, seed, 10**8)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    nbi, npi = get_impl("numba"), get_impl("numpy")
    workloads = build_workloads(args.quick)

    print(f"{'workload':58s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    print("-" * 90)
    for name, fn in workloads:
        fn(nbi)  # warm the JIT
        t_nb, out_nb = timed(fn, nbi, repeat=2)
        t_np, out_np = timed(fn, npi, repeat=1 if "75M" in name else 2)
        ratio = t_np / t_nb if t_nb > 0 else float("inf")
        print(f"{name:58s} {t_nb:9.3f}s {t_np:9.3f}s {ratio:7.1f}x")


if __name__ == "__main__":
    main()

"""k-uniform hypergraphs, pattern containment, freeness scans, exact
pattern-independence numbers, and machine-checkable certificates.

The pattern family is the (k+1)-vertex k-graph with t edges (1 <= t <= k+1).
On k+1 vertices, edges biject with omitted vertices and the symmetric group
is transitive on t-subsets of them, so the isomorphism class depends on t
alone: a (k+1)-set hosts the t-edge pattern iff it spans >= t edges.  The
test suite checks this criterion against a brute-force embedding search.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .colorings import Exhaustive, Sampled, VerifyMode
from .errors import BudgetExceededError
from .kernels import (
    alpha_bb,
    binomial_table,
    conflict_subsets_table,
    count_cliques6_sampled,
    eval_edges,
    first_clique6_sampled,
    first_pattern_subset_oracle,
    first_pattern_subset_table,
    greedy_conflict_free,
    scan_cliques6_table,
    scan_cliques_table,
)

DEFAULT_SCAN_BUDGET = 10**8
DEFAULT_ALPHA_MAX_N = 64
DEFAULT_ALPHA_NODE_BUDGET = 10**8
DEFAULT_ALPHA_MAX_CONFLICTS = 300_000
DEFAULT_TABLE_CAP = 10**7


@dataclass(frozen=True)
class RuleContext:
    """Kernel-ready form of a rule-set-over-coloring membership oracle."""

    counts: np.ndarray  # int8[5]
    cons: np.ndarray  # int8[5,3,3]
    phi_matrix: np.ndarray  # uint8[D,D]
    D: int
    ruleset_id: str
    coloring_seed: int | None


class Hypergraph:
    """Edges are strictly increasing k-tuples over [0, N).

    Backed by an explicit edge array, a membership oracle (callable on a
    sorted k-tuple), or both; when both exist `check_oracle_consistency`
    compares them.  For k=4 a packed 4-subset edge table is built on demand
    (within `table_cap`) to feed the enumeration kernels.
    """

    def __init__(
        self,
        k: int,
        N: int,
        edges: np.ndarray | None = None,
        oracle=None,
        provenance: dict | None = None,
        rule_ctx: RuleContext | None = None,
        table_cap: int = DEFAULT_TABLE_CAP,
    ) -> None:
        if k < 2:
            raise ValueError("uniformity k must be >= 2")
        if N < 0:
            raise ValueError("vertex count must be >= 0")
        if edges is None and oracle is None and rule_ctx is None:
            edges = np.empty((0, k), np.int64)
        self.k = k
        self.N = N
        self.oracle = oracle
        self.provenance = provenance or {}
        self.rule_ctx = rule_ctx
        self.table_cap = table_cap
        self._edge_set: set[tuple[int, ...]] | None = None
        self._table: np.ndarray | None = None
        self._binom: np.ndarray | None = None
        if edges is not None:
            edges = np.asarray(edges, np.int64).reshape(-1, k)
            if len(edges):
                if (np.diff(edges, axis=1) <= 0).any():
                    raise ValueError("edges must be strictly increasing tuples")
                if edges.min() < 0 or edges.max() >= N:
                    raise ValueError("edge vertices out of range")
            order = np.lexsort(edges.T[::-1]) if len(edges) else np.array([], np.int64)
            edges = edges[order]
            if len(edges) > 1 and (np.diff(edges, axis=0) == 0).all(axis=1).any():
                raise ValueError("duplicate edges")
        self.edges = edges

    # -- membership ---------------------------------------------------------

    def _edge_key(self, vs) -> tuple[int, ...]:
        t = tuple(sorted(int(v) for v in vs))
        if len(t) != self.k or len(set(t)) != self.k:
            raise ValueError(f"need {self.k} distinct vertices, got {vs}")
        if t[0] < 0 or t[-1] >= self.N:
            raise ValueError(f"vertices out of range [0, {self.N})")
        return t

    def has_edge(self, vs) -> bool:
        t = self._edge_key(vs)
        if self.edges is not None:
            if self._edge_set is None:
                self._edge_set = set(map(tuple, self.edges.tolist()))
            return t in self._edge_set
        if self.rule_ctx is not None:
            ctx = self.rule_ctx
            quad = np.array([t], np.int64)
            return bool(eval_edges(quad, ctx.counts, ctx.cons, ctx.phi_matrix)[0])
        return bool(self.oracle(t))

    def n_edges(self) -> int:
        if self.edges is None:
            raise BudgetExceededError("edge count of a lazy hypergraph")
        return len(self.edges)

    def is_materialized(self) -> bool:
        return self.edges is not None

    def check_oracle_consistency(self, sample: int | None = None, seed: int = 0) -> bool:
        """Explicit list vs oracle agreement, exhaustive or on a sample."""
        if self.edges is None or (self.oracle is None and self.rule_ctx is None):
            raise ValueError("needs both an explicit edge list and an oracle")
        es = set(map(tuple, self.edges.tolist()))
        if sample is None:
            it = combinations(range(self.N), self.k)
        else:
            rng = np.random.default_rng(seed)
            it = (
                tuple(sorted(rng.choice(self.N, self.k, replace=False).tolist()))
                for _ in range(sample)
            )
        saved, self.edges = self.edges, None
        self._edge_set = None
        try:
            for t in it:
                if self.has_edge(t) != (t in es):
                    return False
        finally:
            self.edges = saved
        return True

    # -- k=4 edge table ------------------------------------------------------

    def binom(self) -> np.ndarray:
        if self._binom is None:
            self._binom = binomial_table(max(self.N, 8), 6)
        return self._binom

    def edge_table(self) -> np.ndarray:
        """uint8 edge indicator over colex ranks of 4-subsets (k=4 only)."""
        if self.k != 4:
            raise ValueError("edge table is a k=4 structure")
        if self._table is None:
            n4 = comb(self.N, 4)
            if n4 > self.table_cap:
                raise BudgetExceededError(
                    f"C({self.N},4)={n4} exceeds the table cap {self.table_cap}"
                )
            binom = self.binom()
            table = np.zeros(n4, np.uint8)
            if self.edges is not None:
                e = self.edges
                if len(e):
                    r = (
                        binom[e[:, 0], 1]
                        + binom[e[:, 1], 2]
                        + binom[e[:, 2], 3]
                        + binom[e[:, 3], 4]
                    )
                    table[r] = 1
            elif self.rule_ctx is not None:
                from .kernels import all_combinations

                quads = all_combinations(self.N, 4)
                ctx = self.rule_ctx
                vals = eval_edges(quads, ctx.counts, ctx.cons, ctx.phi_matrix)
                r = (
                    binom[quads[:, 0], 1]
                    + binom[quads[:, 1], 2]
                    + binom[quads[:, 2], 3]
                    + binom[quads[:, 3], 4]
                )
                table[r] = vals
            else:
                for t in combinations(range(self.N), 4):
                    if self.oracle(t):
                        table[
                            binom[t[0], 1] + binom[t[1], 2] + binom[t[2], 3] + binom[t[3], 4]
                        ] = 1
            self._table = table
        return self._table

    def digest(self) -> str:
        """Content digest of the edge set (materialized graphs only)."""
        if self.edges is None:
            raise BudgetExceededError("digest of a lazy hypergraph")
        h = hashlib.sha256()
        h.update(f"k={self.k} N={self.N};".encode())
        h.update(np.ascontiguousarray(self.edges).tobytes())
        return h.hexdigest()


def complete_hypergraph(N: int, k: int) -> Hypergraph:
    from .kernels import all_combinations

    return Hypergraph(k, N, edges=all_combinations(N, k), provenance={"source": "complete"})


def empty_hypergraph(N: int, k: int) -> Hypergraph:
    return Hypergraph(k, N, edges=np.empty((0, k), np.int64), provenance={"source": "empty"})


def random_hypergraph(N: int, k: int, p: float, seed: int) -> Hypergraph:
    from .kernels import all_combinations

    rng = np.random.default_rng(seed)
    allk = all_combinations(N, k)
    keep = rng.random(len(allk)) < p
    return Hypergraph(k, N, edges=allk[keep], provenance={"source": "random", "p": p, "seed": seed})


# ---------------------------------------------------------------------------
# Pattern containment

def count_edges_within(H: Hypergraph, W) -> int:
    W = sorted(int(v) for v in W)
    return sum(1 for e in combinations(W, H.k) if H.has_edge(e))


def contains_pattern(H: Hypergraph, S, t: int):
    """First (k+1)-subset of S spanning >= t edges, or None."""
    if not 1 <= t <= H.k + 1:
        raise ValueError(f"t must be in [1, {H.k + 1}]")
    S = np.asarray(sorted(int(v) for v in S), np.int64)
    if len(S) and (S[0] < 0 or S[-1] >= H.N):
        raise ValueError("S out of vertex range")
    if len(S) < H.k + 1:
        return None
    if H.k == 4:
        if H.is_materialized() or comb(H.N, 4) <= H.table_cap:
            try:
                found, wit = first_pattern_subset_table(S, t, H.edge_table(), H.binom())
                return tuple(int(x) for x in wit) if found else None
            except BudgetExceededError:
                pass
        if H.rule_ctx is not None:
            ctx = H.rule_ctx
            found, wit = first_pattern_subset_oracle(S, t, ctx.counts, ctx.cons, ctx.phi_matrix)
            return tuple(int(x) for x in wit) if found else None
    for W in combinations(S.tolist(), H.k + 1):
        cnt = 0
        for e in combinations(W, H.k):
            if H.has_edge(e):
                cnt += 1
                if cnt >= t:
                    return tuple(W)
    return None


# ---------------------------------------------------------------------------
# Clique freeness

@dataclass(frozen=True)
class FreenessReport:
    free: bool
    witness: tuple[int, ...] | None
    subsets_checked: int


def _sample_ssubsets_py(H: Hypergraph, s: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield tuple(sorted(rng.choice(H.N, s, replace=False).tolist()))


def is_clique_free(
    H: Hypergraph,
    s: int,
    mode: VerifyMode = Exhaustive(),
    max_subsets: int = DEFAULT_SCAN_BUDGET,
) -> FreenessReport:
    """No s-subset spans all C(s, k) edges.  Exhaustive mode scans every
    s-subset (budget-guarded); sampled mode scans `count` random ones.
    The witness is the lexicographically first clique scanned."""
    if s <= H.k:
        raise ValueError(f"clique order s={s} must exceed uniformity k={H.k}")
    if H.N < s:
        return FreenessReport(True, None, 0)
    if isinstance(mode, Exhaustive):
        total = comb(H.N, s)
        if total > max_subsets:
            raise BudgetExceededError(
                f"C({H.N},{s})={total} exceeds the scan budget {max_subsets}"
            )
        if H.k == 4 and comb(H.N, 4) <= H.table_cap:
            table, binom = H.edge_table(), H.binom()
            if s == 6:
                found, wit = scan_cliques6_table(H.N, table, binom)
            else:
                found, wit = scan_cliques_table(H.N, s, table, binom)
            witness = tuple(int(x) for x in wit) if found else None
            return FreenessReport(not found, witness, total)
        # generic python scan
        for W in combinations(range(H.N), s):
            if all(H.has_edge(e) for e in combinations(W, H.k)):
                return FreenessReport(False, W, total)
        return FreenessReport(True, None, total)
    if not isinstance(mode, Sampled):
        raise TypeError(f"unknown verification mode {mode!r}")
    if H.k == 4 and s == 6 and H.rule_ctx is not None and not H.is_materialized():
        ctx = H.rule_ctx
        n_bad = count_cliques6_sampled(
            ctx.D, mode.count, np.uint64(mode.seed), ctx.counts, ctx.cons, ctx.phi_matrix
        )
        if n_bad == 0:
            return FreenessReport(True, None, mode.count)
        _, wit = first_clique6_sampled(
            ctx.D, mode.count, np.uint64(mode.seed), ctx.counts, ctx.cons, ctx.phi_matrix
        )
        return FreenessReport(False, tuple(int(x) for x in wit), mode.count)
    for W in _sample_ssubsets_py(H, s, mode.count, mode.seed):
        if all(H.has_edge(e) for e in combinations(W, H.k)):
            return FreenessReport(False, W, mode.count)
    return FreenessReport(True, None, mode.count)


# ---------------------------------------------------------------------------
# Exact pattern / clique independence via branch and bound

@dataclass(frozen=True)
class AlphaResult:
    value: int
    witness: tuple[int, ...]
    nodes: int
    n_conflicts: int


def _conflicts_generic(H: Hypergraph, z: int, thresh: int) -> np.ndarray:
    rows = []
    for W in combinations(range(H.N), z):
        cnt = 0
        for e in combinations(W, H.k):
            if H.has_edge(e):
                cnt += 1
                if cnt >= thresh:
                    break
        if cnt >= thresh:
            rows.append(W)
    return np.array(rows, np.int64).reshape(-1, z)


def _alpha_exact(
    H: Hypergraph, z: int, thresh: int, max_n: int, node_budget: int,
    max_conflicts: int,
) -> AlphaResult:
    if H.N > max_n:
        raise BudgetExceededError(f"N={H.N} exceeds the exact-solver budget {max_n}")
    if H.N < z:
        return AlphaResult(H.N, tuple(range(H.N)), 0, 0)
    if H.k == 4 and comb(H.N, 4) <= H.table_cap:
        cs = conflict_subsets_table(H.N, z, thresh, H.edge_table(), H.binom())
    else:
        cs = _conflicts_generic(H, z, thresh)
    if len(cs) > max_conflicts:
        raise BudgetExceededError(
            f"{len(cs)} forbidden subsets exceed the solver budget {max_conflicts}"
        )
    N = H.N
    if len(cs) == 0:
        return AlphaResult(N, tuple(range(N)), 0, 0)
    # vertex -> incident conflict ids (CSR), order by conflict degree desc
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
    seed_mask = greedy_conflict_free(N, cs, vert_off, vert_cs, order)
    value, mask, nodes, completed = alpha_bb(
        N, cs, vert_off, vert_cs, order, seed_mask, node_budget
    )
    if not completed:
        raise BudgetExceededError(
            f"branch-and-bound exceeded {node_budget} nodes (N={N}, conflicts={len(cs)})"
        )
    witness = tuple(int(v) for v in np.flatnonzero(mask))
    return AlphaResult(int(value), witness, int(nodes), len(cs))


def alpha_pattern(
    H: Hypergraph,
    t: int,
    max_n: int = DEFAULT_ALPHA_MAX_N,
    node_budget: int = DEFAULT_ALPHA_NODE_BUDGET,
    max_conflicts: int = DEFAULT_ALPHA_MAX_CONFLICTS,
) -> AlphaResult:
    """Largest S spanning no (k+1)-subset with >= t edges (exact)."""
    if not 1 <= t <= H.k + 1:
        raise ValueError(f"t must be in [1, {H.k + 1}]")
    return _alpha_exact(H, H.k + 1, t, max_n, node_budget, max_conflicts)


def alpha_clique(
    H: Hypergraph,
    t: int,
    max_n: int = DEFAULT_ALPHA_MAX_N,
    node_budget: int = DEFAULT_ALPHA_NODE_BUDGET,
    max_conflicts: int = DEFAULT_ALPHA_MAX_CONFLICTS,
) -> AlphaResult:
    """Largest S spanning no complete t-vertex sub-hypergraph (exact)."""
    if t < H.k:
        raise ValueError(f"clique order t={t} must be >= uniformity k={H.k}")
    return _alpha_exact(H, t, comb(t, H.k), max_n, node_budget, max_conflicts)


# ---------------------------------------------------------------------------
# Certificates

CERT_KINDS = ("CliqueFound", "PatternFound", "FreenessChecked", "AlphaBound", "ErUpperBound")


@dataclass(frozen=True)
class Certificate:
    kind: str
    k: int
    s_or_t: int | dict
    N: int
    m: int | None
    witness: tuple[int, ...]
    provenance: dict
    recheck: str
    family: str = "pattern"  # pattern | clique, for alpha-style kinds

    def __post_init__(self) -> None:
        if self.kind not in CERT_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def to_json(self) -> str:
        doc = {
            "format": 1,
            "kind": self.kind,
            "k": self.k,
            "s_or_t": self.s_or_t,
            "N": self.N,
            "m": self.m,
            "witness": list(self.witness),
            "family": self.family,
            "provenance": self.provenance,
            "recheck": self.recheck,
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "Certificate":
        doc = json.loads(text)
        return Certificate(
            kind=doc["kind"],
            k=doc["k"],
            s_or_t=doc["s_or_t"],
            N=doc["N"],
            m=doc.get("m"),
            witness=tuple(doc["witness"]),
            provenance=doc.get("provenance", {}),
            recheck=doc.get("recheck", ""),
            family=doc.get("family", "pattern"),
        )


@dataclass(frozen=True)
class Rejection:
    reason: str
    witness: tuple[int, ...] | None
    detail: str


def certify_er_upper(
    H: Hypergraph,
    s: int,
    t: int,
    m: int | None = None,
    family: str = "pattern",
    max_subsets: int = DEFAULT_SCAN_BUDGET,
    max_n: int = DEFAULT_ALPHA_MAX_N,
):
    """Certificate that H witnesses: every s-clique-free graph value of the
    pattern-independence minimum on N vertices is <= m-1.

    Valid iff H is s-clique-free and the exact independence number is < m;
    with m omitted, m = alpha + 1 (the strongest certified bound).
    Returns a Rejection naming the failed check instead of raising.
    """
    if family not in ("pattern", "clique"):
        raise ValueError("family must be 'pattern' or 'clique'")
    rep = is_clique_free(H, s, Exhaustive(), max_subsets=max_subsets)
    if not rep.free:
        return Rejection("clique-found", rep.witness, f"spans a complete {s}-set")
    alpha = alpha_pattern(H, t, max_n=max_n) if family == "pattern" else alpha_clique(H, t, max_n=max_n)
    if m is None:
        m = alpha.value + 1
    if alpha.value >= m:
        return Rejection(
            "alpha-not-below-m", alpha.witness, f"independence {alpha.value} >= m={m}"
        )
    fam_op = "alpha_pattern" if family == "pattern" else "alpha_clique"
    return Certificate(
        kind="ErUpperBound",
        k=H.k,
        s_or_t={"s": s, "t": t},
        N=H.N,
        m=m,
        witness=alpha.witness,
        provenance=dict(H.provenance),
        recheck=f"is_clique_free(s={s}, exhaustive) and {fam_op}(t={t}).value < {m}",
        family=family,
    )


def verify_certificate(cert: Certificate, H: Hypergraph) -> bool:
    """Re-run the named checks of a certificate against H."""
    if cert.k != H.k or cert.N != H.N:
        return False
    if cert.kind == "CliqueFound":
        s = cert.s_or_t if isinstance(cert.s_or_t, int) else cert.s_or_t["s"]
        return len(cert.witness) == s and all(
            H.has_edge(e) for e in combinations(cert.witness, H.k)
        )
    if cert.kind == "PatternFound":
        t = cert.s_or_t if isinstance(cert.s_or_t, int) else cert.s_or_t["t"]
        return (
            len(cert.witness) == H.k + 1
            and count_edges_within(H, cert.witness) >= t
        )
    if cert.kind == "FreenessChecked":
        s = cert.s_or_t if isinstance(cert.s_or_t, int) else cert.s_or_t["s"]
        return is_clique_free(H, s, Exhaustive()).free
    if cert.kind == "AlphaBound":
        t = cert.s_or_t if isinstance(cert.s_or_t, int) else cert.s_or_t["t"]
        alpha = alpha_pattern(H, t) if cert.family == "pattern" else alpha_clique(H, t)
        return alpha.value == cert.m - 1 if cert.m is not None else True
    if cert.kind == "ErUpperBound":
        s = cert.s_or_t["s"]
        t = cert.s_or_t["t"]
        if not is_clique_free(H, s, Exhaustive()).free:
            return False
        alpha = alpha_pattern(H, t) if cert.family == "pattern" else alpha_clique(H, t)
        return alpha.value < cert.m
    return False


# ---------------------------------------------------------------------------
# File format: header "format=1 k=<int> N=<int>", one edge per line

def hypergraph_to_text(H: Hypergraph) -> str:
    if H.edges is None:
        raise BudgetExceededError("cannot serialize a lazy hypergraph")
    lines = [f"format=1 k={H.k} N={H.N}"]
    for e in H.edges:
        lines.append(" ".join(str(int(v)) for v in e))
    return "\n".join(lines) + "\n"


def hypergraph_from_text(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    k, N = int(header["k"]), int(header["N"])
    rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    edges = np.array(rows, np.int64).reshape(-1, k)
    return Hypergraph(k, N, edges=edges, provenance={"source": "file"})


def save_hypergraph(H: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(hypergraph_to_text(H))


def load_hypergraph(path) -> Hypergraph:
    with open(path) as fh:
        return hypergraph_from_text(fh.read())

"""Witness-hunting procedures over the constructed 4-graphs.

Two executable searches, each deterministic in its inputs:

* a five-layer local-maxima stack over a (2n)^5+1 vertex tuple, followed by
  a color-driven walk that assembles five vertices spanning >= 4 edges
  (a one-edge-short 5-clique);
* a greedy two-sided interval narrowing over an n^2 vertex tuple that
  assembles five vertices spanning >= 2 edges.

Every branch either returns a PatternCertificate whose witness re-verifies
under the ambient edge oracle, reports a MonotoneRun (the desk-scale escape
hatch when the coloring lacks the universal good-tuple property), or returns
Exhausted with a full trace -- the last is evidence of an implementation bug,
never an expected outcome, and is therefore debuggable rather than fatal.

Internally delta positions are 0-based in the layer stack and 1-based (with
sentinels 0 and m) in the greedy state, matching the natural bookkeeping of
each procedure; all reported MonotoneRun positions are 1-based delta indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .colorings import BLUE, PairColoring, TuplePattern, find_good_tuple, pattern_lemma41
from .errors import InvariantViolation
from .hypergraphs import Hypergraph
from .kernels import delta_consecutive
from .stepping_up import delta_value, find_monotone_run_raw


# ---------------------------------------------------------------------------
# Outcomes

@dataclass(frozen=True)
class MonotoneRun:
    """A length-n monotone stretch of deltas that the hunt could not convert
    into a pattern witness.  Positions are 1-based delta indices; they are
    consecutive for layer-extraction shortfalls and window runs, and may be
    non-consecutive for the greedy terminal branches."""

    start: int
    length: int
    direction: str  # "increasing" | "decreasing"
    positions: tuple[int, ...]
    layer: int | None = None

    @property
    def tag(self) -> str:
        return "MonotoneRun"


@dataclass(frozen=True)
class PatternCertificate:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]
    target: int
    branch: str

    @property
    def tag(self) -> str:
        return "PatternCertificate"


@dataclass(frozen=True)
class Exhausted:
    trace: tuple[str, ...]

    @property
    def tag(self) -> str:
        return "Exhausted"


WalkOutcome = PatternCertificate | MonotoneRun | Exhausted


# ---------------------------------------------------------------------------
# Layer stacks

@dataclass(frozen=True)
class LayerStack:
    """Nested local-maxima layers over delta(Q).

    layers[0] is every delta position (0-based); layers[t] (t in 1..5) holds
    the first beta_t local maxima with respect to layers[t-1], where
    beta_t = (m-1) / (2n)^t."""

    Q: np.ndarray
    n: int
    deltas: np.ndarray
    layers: tuple[np.ndarray, ...]
    betas: tuple[int, ...]


def _interior_local_maxima(vals: np.ndarray) -> np.ndarray:
    """0-based offsets of interior local maxima of vals."""
    if len(vals) < 3:
        return np.empty(0, np.int64)
    mid = vals[1:-1]
    return np.flatnonzero((vals[:-2] < mid) & (mid > vals[2:])) + 1


def extract_local_maxima_layer(
    prev: np.ndarray, deltas: np.ndarray, count: int, n: int
) -> np.ndarray | MonotoneRun:
    """First `count` local maxima of the subsequence deltas[prev]; on a
    shortfall, report a length-n monotone consecutive run of the subsequence
    (one must exist, by the extremum-counting argument)."""
    vals = deltas[prev]
    maxima = _interior_local_maxima(vals)
    if len(maxima) >= count:
        return prev[maxima[:count]]
    j = find_monotone_run_raw(vals, n)
    if j < 0:
        raise InvariantViolation(
            f"only {len(maxima)} local maxima for a quota of {count} "
            f"yet no monotone run of length {n} in a sequence of {len(vals)}"
        )
    run = prev[j : j + n]
    direction = "increasing" if deltas[run[0]] < deltas[run[1]] else "decreasing"
    return MonotoneRun(
        start=int(run[0]) + 1,
        length=n,
        direction=direction,
        positions=tuple(int(p) + 1 for p in run),
    )


def build_layers(Q, n: int) -> LayerStack | MonotoneRun:
    """Five nested layers over delta(Q); |Q| must be exactly (2n)^5 + 1 so
    every quota beta_t = (m-1)/(2n)^t is an integer."""
    if n < 2:
        raise ValueError("n must be >= 2")
    Q = np.asarray(sorted(int(v) for v in Q), np.int64)
    m = (2 * n) ** 5 + 1
    if len(Q) != m:
        raise ValueError(f"|Q| must be (2n)^5+1 = {m}, got {len(Q)}")
    if (np.diff(Q) <= 0).any():
        raise ValueError("Q must be strictly increasing")
    deltas = delta_consecutive(Q)
    betas = tuple((m - 1) // (2 * n) ** t for t in range(1, 6))
    layers: list[np.ndarray] = [np.arange(m - 1, dtype=np.int64)]
    for t in range(1, 6):
        nxt = extract_local_maxima_layer(layers[t - 1], deltas, betas[t - 1], n)
        if isinstance(nxt, MonotoneRun):
            return MonotoneRun(
                nxt.start, nxt.length, nxt.direction, nxt.positions, layer=t
            )
        layers.append(nxt)
    return LayerStack(Q, n, deltas, tuple(layers), betas)


def neighbors(stack: LayerStack, j: int, t: int) -> tuple[int, int]:
    """Closest positions of layers[t-1] strictly left and right of j, for
    j in layers[t] (0-based positions)."""
    if not 1 <= t <= 5:
        raise ValueError("t must be in 1..5")
    layer_t = stack.layers[t]
    if j not in layer_t:
        raise ValueError(f"position {j} is not in layer {t}")
    base = stack.layers[t - 1]
    i = int(np.searchsorted(base, j))
    if base[i] != j:
        raise InvariantViolation(f"layer {t} not nested in layer {t - 1} at {j}")
    if i == 0 or i == len(base) - 1:
        raise IndexError(f"position {j} has no layer-{t - 1} neighbor on one side")
    return int(base[i - 1]), int(base[i + 1])


def check_star_property(stack: LayerStack, t: int) -> bool:
    """Exhaustive interval scan: consecutive layer elements a < b dominate
    every delta strictly between them, and differ."""
    d = stack.deltas
    layer = stack.layers[t]
    for a, b in zip(layer[:-1], layer[1:]):
        if d[a] == d[b]:
            return False
        hi = max(d[a], d[b])
        if (d[a + 1 : b] >= hi).any():
            return False
    return True


def check_observation1(stack: LayerStack) -> bool:
    """For every t and j in layers[t] \\ layers[t+1]: both layer-(t-1)
    neighbors exist, carry smaller deltas, avoid layers[t], and every delta
    on [j-, j+] other than delta_j is smaller than delta_j."""
    d = stack.deltas
    for t in range(1, 6):
        upper = set(stack.layers[t + 1].tolist()) if t < 5 else set()
        for j in stack.layers[t]:
            if int(j) in upper:
                continue
            jm, jp = neighbors(stack, int(j), t)
            if d[jm] >= d[j] or d[jp] >= d[j]:
                return False
            if jm in stack.layers[t] or jp in stack.layers[t]:
                return False
            seg = d[jm : jp + 1]
            if (seg >= d[j]).sum() != 1:
                return False
    return True


# ---------------------------------------------------------------------------
# Walk over the five-layer stack

def _check_h_matches(H: Hypergraph, phi: PairColoring, ruleset_id: str) -> None:
    ctx = H.rule_ctx
    if ctx is None or ctx.ruleset_id != ruleset_id:
        raise ValueError(f"hypergraph must be built from rule set {ruleset_id!r}")
    if ctx.D != phi.D or not (ctx.phi_matrix == phi.matrix).all():
        raise ValueError("hypergraph and coloring disagree")


def _certify(
    Q: np.ndarray,
    H: Hypergraph,
    positions: tuple[int, ...],
    claimed_deltas: tuple[int, ...],
    target: int,
    branch: str,
    trace: list[str],
) -> PatternCertificate | Exhausted:
    """Materialize the vertex tuple at Q[positions], confirm the claimed
    consecutive deltas, and collect its edges."""
    verts = [int(Q[p]) for p in positions]
    trace.append(f"candidate branch={branch} vertices={verts}")
    if any(a >= b for a, b in zip(verts, verts[1:])):
        trace.append("reject=vertices-not-increasing")
        return Exhausted(tuple(trace))
    actual = [delta_value(a, b) for a, b in zip(verts, verts[1:])]
    if tuple(actual) != tuple(claimed_deltas):
        trace.append(f"reject=delta-mismatch actual={actual} claimed={list(claimed_deltas)}")
        return Exhausted(tuple(trace))
    edges = tuple(e for e in combinations(verts, 4) if H.has_edge(e))
    trace.append(f"edges={len(edges)} target={target}")
    if len(edges) < target:
        trace.append("reject=too-few-edges")
        return Exhausted(tuple(trace))
    return PatternCertificate(tuple(verts), edges, target, branch)


def walk_section3(
    stack: LayerStack, phi: PairColoring, H: Hypergraph
) -> PatternCertificate | Exhausted:
    """Descend the stack from its top element and follow the two-color case
    analysis; every branch ends in a five-vertex candidate expected to span
    >= 4 edges."""
    _check_h_matches(H, phi, "section3")
    d = stack.deltas
    if int(d.max()) >= phi.D:
        raise ValueError("stack deltas exceed the coloring ground set")
    Q = stack.Q
    trace: list[str] = []

    a = int(stack.layers[5][0])
    _, b = neighbors(stack, a, 5)
    c, _ = neighbors(stack, b, 4)
    trace.append(f"pick=a pos={a} delta={int(d[a])}")
    trace.append(f"pick=b pos={b} delta={int(d[b])}")
    trace.append(f"pick=c pos={c} delta={int(d[c])}")
    if not (a < c < b and d[c] < d[b] < d[a]):
        trace.append("reject=top-structure")
        return Exhausted(tuple(trace))

    def color(x: int, y: int) -> int:
        return phi.color(int(d[x]), int(d[y]))

    cb = color(c, b)
    trace.append(f"test=phi(c,b) color={'blue' if cb == BLUE else 'red'}")
    if cb == BLUE:
        dd, _ = neighbors(stack, c, 3)
        _, e = neighbors(stack, dd, 2)
        _, f = neighbors(stack, e, 1)
        trace.append(f"pick=d pos={dd} e pos={e} f pos={f}")
        for x, name in ((dd, "d"), (e, "e"), (f, "f")):
            xb = color(x, b)
            trace.append(f"test=phi({name},b) color={'blue' if xb == BLUE else 'red'}")
            if xb == BLUE:
                return _certify(
                    Q, H,
                    (a, x, x + 1, c + 1, b + 1),
                    (int(d[a]), int(d[x]), int(d[c]), int(d[b])),
                    4, f"valley-pair-blue/{name}", trace,
                )
        return _certify(
            Q, H,
            (dd, e, f, f + 1, b + 1),
            (int(d[dd]), int(d[e]), int(d[f]), int(d[b])),
            4, "descent-triple-red/blue-side", trace,
        )

    _, dd = neighbors(stack, c, 3)
    db = color(dd, b)
    trace.append(f"pick=d pos={dd} test=phi(d,b) color={'blue' if db == BLUE else 'red'}")
    if db == BLUE:
        e, _ = neighbors(stack, dd, 2)
        _, f = neighbors(stack, e, 1)
        trace.append(f"pick=e pos={e} f pos={f}")
        for x, name in ((e, "e"), (f, "f")):
            xb = color(x, b)
            trace.append(f"test=phi({name},b) color={'blue' if xb == BLUE else 'red'}")
            if xb == BLUE:
                return _certify(
                    Q, H,
                    (a, x, x + 1, dd + 1, b + 1),
                    (int(d[a]), int(d[x]), int(d[dd]), int(d[b])),
                    4, f"valley-pair-blue/{name}", trace,
                )
        return _certify(
            Q, H,
            (c, e, f, f + 1, b + 1),
            (int(d[c]), int(d[e]), int(d[f]), int(d[b])),
            4, "descent-triple-red/mixed", trace,
        )

    _, e = neighbors(stack, dd, 2)
    f, _ = neighbors(stack, e, 1)
    fb = color(f, b)
    eb = color(e, b)
    trace.append(f"pick=e pos={e} f pos={f}")
    trace.append(f"test=phi(f,b) color={'blue' if fb == BLUE else 'red'}")
    trace.append(f"test=phi(e,b) color={'blue' if eb == BLUE else 'red'}")
    if fb == BLUE and eb == BLUE:
        return _certify(
            Q, H,
            (a, f, f + 1, e + 1, b + 1),
            (int(d[a]), int(d[f]), int(d[e]), int(d[b])),
            4, "valley-pair-blue/fe", trace,
        )
    if fb != BLUE:
        return _certify(
            Q, H,
            (c, dd, f, f + 1, b + 1),
            (int(d[c]), int(d[dd]), int(d[f]), int(d[b])),
            4, "descent-triple-red/f", trace,
        )
    return _certify(
        Q, H,
        (c, dd, e, e + 1, b + 1),
        (int(d[c]), int(d[dd]), int(d[e]), int(d[b])),
        4, "descent-triple-red/e", trace,
    )


# ---------------------------------------------------------------------------
# Greedy two-sided narrowing

@dataclass(frozen=True)
class GreedyState:
    """One step of the narrowing; delta indices are 1-based with sentinels
    sigma=0 and tau=n^2."""

    r: int
    sigma: int
    tau: int
    L: tuple[int, ...]
    R: tuple[int, ...]
    chosen: int
    branch: str

    def trace_line(self) -> str:
        return (
            f"r={self.r} sigma={self.sigma} tau={self.tau} "
            f"L={len(self.L)} R={len(self.R)} chosen={self.chosen} branch={self.branch}"
        )


@dataclass
class GreedyTrace:
    states: list[GreedyState] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def step(self, state: GreedyState) -> None:
        self.states.append(state)
        self.lines.append(state.trace_line())

    def note(self, line: str) -> None:
        self.lines.append(line)


def _assert_greedy_invariants(
    d: np.ndarray, m: int, n: int, r: int, sigma: int, tau: int, L: list[int], R: list[int]
) -> None:
    if len(L) + len(R) != r:
        raise InvariantViolation(f"|L|+|R|={len(L) + len(R)} != r={r}")
    if sigma != (max(L) if L else 0) or tau != (min(R) if R else m):
        raise InvariantViolation("sigma/tau out of sync with L/R")
    if tau - sigma < m - 1 - (n - 1) * len(L) - len(R):
        raise InvariantViolation(
            f"window shrank too fast: tau-sigma={tau - sigma} < "
            f"{m - 1 - (n - 1) * len(L) - len(R)}"
        )
    if len(L) > n - 1 or len(R) > n - 1:
        raise InvariantViolation("a side exceeded n-1")
    window = d[sigma + 1 : tau]
    for side in (L, R):
        for a in side:
            if not (d[a] > window).all():
                raise InvariantViolation(f"boundary delta d[{a}] does not dominate the window")


def _unique_window_max(d: np.ndarray, sigma: int, tau: int) -> int:
    """1-based index of the unique maximum of d over (sigma, tau)."""
    window = d[sigma + 1 : tau]
    if len(window) == 0:
        raise InvariantViolation("empty window")
    hi = window.max()
    hits = np.flatnonzero(window == hi)
    if len(hits) != 1:
        raise InvariantViolation(f"window maximum {hi} is not unique")
    return sigma + 1 + int(hits[0])


def _hunt_monotone_values(
    Q: np.ndarray,
    H: Hypergraph,
    phi: PairColoring,
    d: np.ndarray,
    positions: list[int],
    increasing: bool,
    pat: TuplePattern,
    branch: str,
    trace: GreedyTrace,
) -> PatternCertificate | MonotoneRun | Exhausted:
    """Positions (1-based, ascending) carry monotone delta values; look for a
    good 4-tuple among the values and realize it as five vertices."""
    values = sorted(int(d[p]) for p in positions)
    good = find_good_tuple(phi, values, pat)
    if good is None:
        trace.note(f"hunt={branch} good-tuple=absent values={values}")
        return MonotoneRun(
            start=int(positions[0]),
            length=len(positions),
            direction="increasing" if increasing else "decreasing",
            positions=tuple(int(p) for p in positions),
        )
    chosen = sorted(p for p in positions if int(d[p]) in set(good))
    trace.note(f"hunt={branch} good-tuple={list(good)} positions={chosen}")
    q1, q2, q3, q4 = chosen
    if increasing:
        verts_idx = (q1 - 1, q1, q2, q3, q4)  # v_q1, v_q1+1, v_q2+1, v_q3+1, v_q4+1
    else:
        verts_idx = (q1 - 1, q2 - 1, q3 - 1, q4 - 1, q4)  # v_q1 .. v_q4, v_q4+1
    claimed = (int(d[q1]), int(d[q2]), int(d[q3]), int(d[q4]))
    out = _certify(Q, H, verts_idx, claimed, 2, branch, trace.lines)
    return out


def greedy_lrs(
    Q, H: Hypergraph, n: int, phi: PairColoring
) -> PatternCertificate | MonotoneRun | Exhausted:
    """Greedy interval narrowing over an n^2-tuple Q, hunting five vertices
    spanning >= 2 edges.

    Each step removes the unique window maximum into the left or right
    boundary set; a window maximum violating the narrow/touch dichotomy
    yields a witness outright, and once a boundary set reaches n-1 elements
    the accumulated monotone delta values are fed to the good-tuple hunt."""
    if n < 5:
        raise ValueError("n must be >= 5 (the good-tuple template needs 4 of n values)")
    Q = np.asarray(sorted(int(v) for v in Q), np.int64)
    m = n * n
    if len(Q) != m:
        raise ValueError(f"|Q| must be n^2 = {m}, got {len(Q)}")
    if (np.diff(Q) <= 0).any():
        raise ValueError("Q must be strictly increasing")
    _check_h_matches(H, phi, "section4")
    pat = pattern_lemma41()

    # paper-style indexing: d[j] = delta(v_j, v_{j+1}) for j in 1..m-1
    d = np.concatenate([np.array([-1], np.int64), delta_consecutive(Q)])
    if int(d[1:].max()) >= phi.D:
        raise ValueError("deltas exceed the coloring ground set")

    sigma, tau = 0, m
    L: list[int] = []
    R: list[int] = []
    r = 0
    trace = GreedyTrace()
    _assert_greedy_invariants(d, m, n, r, sigma, tau, L, R)

    while r <= 2 * n - 3:
        i = _unique_window_max(d, sigma, tau)
        if i - sigma <= n - 1:
            branch = "left"
        elif tau - i == 1:
            branch = "right"
        else:
            # dichotomy fails: a descent inside the window gives a witness
            descent = -1
            for a in range(sigma + 1, i - 1):
                if d[a] > d[a + 1]:
                    descent = a
                    break
            trace.step(GreedyState(r, sigma, tau, tuple(L), tuple(R), i, "window-split"))
            if descent >= 0:
                b = i + 1
                claimed = (int(d[descent]), int(d[descent + 1]), int(d[i]), int(d[b]))
                return _certify(
                    Q, H,
                    (descent - 1, descent, descent + 1, b - 1, b),
                    claimed, 2, "window-split", trace.lines,
                )
            # no descent: the window prefix is an increasing run of length >= n
            run = list(range(sigma + 1, i + 1))
            return _hunt_monotone_values(
                Q, H, phi, d, run, True, pat, "window-run", trace,
            )
        if branch == "left":
            L.append(i)
            sigma = i
        else:
            R.append(i)
            tau = i
        r += 1
        trace.step(GreedyState(r, sigma, tau, tuple(L), tuple(R), i, branch))
        _assert_greedy_invariants(d, m, n, r, sigma, tau, L, R)
        if len(L) == n - 1 or len(R) == n - 1:
            i2 = _unique_window_max(d, sigma, tau)
            if len(L) == n - 1:
                positions = sorted(L + [i2])
                trace.note(f"terminal=L extra={i2}")
                vals = [int(d[p]) for p in positions]
                if not all(x > y for x, y in zip(vals, vals[1:])):
                    trace.note(f"reject=terminal-values-not-decreasing values={vals}")
                    return Exhausted(tuple(trace.lines))
                return _hunt_monotone_values(
                    Q, H, phi, d, positions, False, pat, "terminal-L", trace,
                )
            positions = sorted(R + [i2])
            trace.note(f"terminal=R extra={i2}")
            vals = [int(d[p]) for p in positions]
            if not all(x < y for x, y in zip(vals, vals[1:])):
                trace.note(f"reject=terminal-values-not-increasing values={vals}")
                return Exhausted(tuple(trace.lines))
            return _hunt_monotone_values(
                Q, H, phi, d, positions, True, pat, "terminal-R", trace,
            )
    trace.note("reject=step-limit")
    return Exhausted(tuple(trace.lines))

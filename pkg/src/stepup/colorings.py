"""Red/blue pair colorings of a ground set [0, D), good-tuple templates,
universal verification over n-subsets, and randomized restart search.

A coloring is a symmetric D x D uint8 matrix (RED=1, BLUE=0) plus the seed
that generated it, so any shipped coloring can be regenerated bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import BudgetExceededError
from .kernels import (
    BLUE,
    RED,
    bad_nsubsets_exhaustive,
    bad_nsubsets_given,
    first_good_tuple,
)
from .stepping_up import MAX_BIT_WIDTH

_COLOR_CHAR = {RED: "R", BLUE: "B"}
_CHAR_COLOR = {"R": RED, "B": BLUE}


@dataclass(frozen=True)
class PairColoring:
    """Symmetric red/blue coloring of the pairs of {0, .., D-1}."""

    D: int
    matrix: np.ndarray  # uint8, symmetric, zero diagonal
    seed: int | None = None

    def __post_init__(self) -> None:
        if not 2 <= self.D <= MAX_BIT_WIDTH:
            raise ValueError(f"ground size must be in [2, {MAX_BIT_WIDTH}], got {self.D}")
        m = self.matrix
        if m.shape != (self.D, self.D) or m.dtype != np.uint8:
            raise ValueError("matrix must be uint8 of shape (D, D)")
        if (m != m.T).any() or m.diagonal().any() or (m > 1).any():
            raise ValueError("matrix must be symmetric 0/1 with zero diagonal")

    def color(self, i: int, j: int) -> int:
        if i == j or not (0 <= i < self.D and 0 <= j < self.D):
            raise ValueError(f"invalid pair ({i}, {j}) for D={self.D}")
        return int(self.matrix[i, j])

    def n_red(self) -> int:
        return int(self.matrix.sum()) // 2


def coloring_from_pairs(D: int, red_pairs, seed: int | None = None) -> PairColoring:
    """Coloring with the given pairs red and everything else blue."""
    m = np.zeros((D, D), np.uint8)
    for i, j in red_pairs:
        m[i, j] = m[j, i] = RED
    return PairColoring(D, m, seed)


def solid_coloring(D: int, color: int) -> PairColoring:
    m = np.full((D, D), color, np.uint8)
    np.fill_diagonal(m, 0)
    return PairColoring(D, m)


def random_coloring(D: int, seed: int) -> PairColoring:
    """Each pair red or blue by an independent fair coin from a PCG64 stream
    seeded with `seed`; identical (D, seed) gives identical colorings."""
    if not 2 <= D <= MAX_BIT_WIDTH:
        raise ValueError(f"ground size must be in [2, {MAX_BIT_WIDTH}], got {D}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    iu = np.triu_indices(D, 1)
    vals = rng.integers(0, 2, size=len(iu[0]), dtype=np.uint8)
    m = np.zeros((D, D), np.uint8)
    m[iu] = vals
    m[(iu[1], iu[0])] = vals
    return PairColoring(D, m, seed=int(seed))


# ---------------------------------------------------------------------------
# Good-tuple templates

@dataclass(frozen=True)
class TuplePattern:
    """Color template for an increasing r-tuple: constraints are
    (i, j, color) with 1 <= i < j <= r (1-based tuple positions)."""

    arity: int
    constraints: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise ValueError("arity must be >= 2")
        seen = set()
        for i, j, color in self.constraints:
            if not (1 <= i < j <= self.arity):
                raise ValueError(f"constraint ({i},{j}) out of range for arity {self.arity}")
            if (i, j) in seen:
                raise ValueError(f"duplicate constraint pair ({i},{j})")
            if color not in (RED, BLUE):
                raise ValueError(f"bad color {color}")
            seen.add((i, j))

    def constraint_array(self) -> np.ndarray:
        """(n_constraints, 3) int8 array with 0-based positions, for kernels."""
        if not self.constraints:
            return np.empty((0, 3), np.int8)
        return np.array(
            [(i - 1, j - 1, c) for i, j, c in self.constraints], np.int8
        )

    def n_red(self) -> int:
        return sum(1 for _, _, c in self.constraints if c == RED)

    def n_blue(self) -> int:
        return sum(1 for _, _, c in self.constraints if c == BLUE)

    def unconstrained_pairs(self) -> int:
        return comb(self.arity, 2) - len(self.constraints)


def pattern_lemma31() -> TuplePattern:
    """6-tuple template with 11 constraints (5 red, 6 blue)."""
    return TuplePattern(
        arity=6,
        constraints=(
            (1, 4, RED),
            (2, 4, RED),
            (3, 4, RED),
            (3, 5, RED),
            (4, 5, RED),
            (1, 2, BLUE),
            (1, 3, BLUE),
            (2, 3, BLUE),
            (3, 6, BLUE),
            (4, 6, BLUE),
            (5, 6, BLUE),
        ),
    )


def pattern_lemma41() -> TuplePattern:
    """4-tuple template with 5 constraints (2 red, 3 blue)."""
    return TuplePattern(
        arity=4,
        constraints=(
            (1, 3, RED),
            (2, 4, RED),
            (1, 2, BLUE),
            (2, 3, BLUE),
            (3, 4, BLUE),
        ),
    )


PATTERNS = {"lemma31": pattern_lemma31, "lemma41": pattern_lemma41}


def bad_probability(pat: TuplePattern) -> Fraction:
    """Chance a uniformly colored tuple violates the template: 1 - 2^-c."""
    c = len(pat.constraints)
    return Fraction((1 << c) - 1, 1 << c)


# ---------------------------------------------------------------------------
# Verification

@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("sample count must be >= 1")


VerifyMode = Exhaustive | Sampled


@dataclass(frozen=True)
class VerifyReport:
    holds: bool
    counterexample: tuple[int, ...] | None
    sets_checked: int


def find_good_tuple(phi: PairColoring, A, pat: TuplePattern):
    """Lexicographically first increasing pat.arity-tuple of A whose colors
    satisfy every constraint, or None."""
    A = np.asarray(sorted(int(a) for a in A), np.int64)
    if len(A) < pat.arity:
        raise ValueError(f"|A|={len(A)} smaller than pattern arity {pat.arity}")
    if A[0] < 0 or A[-1] >= phi.D:
        raise ValueError("A must be a subset of the coloring ground set")
    found, out = first_good_tuple(A, pat.arity, pat.constraint_array(), phi.matrix)
    return tuple(int(x) for x in out) if found else None


def _sample_subsets(D: int, n: int, count: int, seed: int) -> np.ndarray:
    """Distinct sorted n-subsets of [0, D), uniform without replacement."""
    total = comb(D, n)
    if count >= total:
        from .kernels import all_combinations

        return all_combinations(D, n)
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    seen: set[tuple[int, ...]] = set()
    rows = []
    while len(rows) < count:
        pick = tuple(sorted(rng.choice(D, size=n, replace=False).tolist()))
        if pick not in seen:
            seen.add(pick)
            rows.append(pick)
    return np.array(rows, np.int64)


def verify_universal(
    phi: PairColoring,
    n: int,
    pat: TuplePattern,
    mode: VerifyMode = Exhaustive(),
    max_subsets: int = 10**6,
    count_all: bool = False,
) -> VerifyReport:
    """Does every n-subset of the ground set contain a good tuple?

    Exhaustive mode scans all C(D, n) subsets (guarded by max_subsets);
    Sampled mode scans `count` distinct uniform subsets.  The counterexample,
    when present, is the lexicographically first bad subset scanned.  With
    count_all the scan continues past the first counterexample and
    sets_checked reflects the full scan.
    """
    if n < pat.arity:
        raise ValueError(f"n={n} must be >= pattern arity {pat.arity}")
    if n > phi.D:
        raise ValueError(f"n={n} exceeds ground size D={phi.D}")
    cons = pat.constraint_array()
    early = not count_all
    if isinstance(mode, Exhaustive):
        total = comb(phi.D, n)
        if total > max_subsets:
            raise BudgetExceededError(
                f"C({phi.D},{n})={total} exceeds the exhaustive budget {max_subsets}"
            )
        checked, bad, first_bad = bad_nsubsets_exhaustive(
            phi.D, n, pat.arity, cons, phi.matrix, early
        )
    else:
        rows = _sample_subsets(phi.D, n, mode.count, mode.seed)
        checked, bad, first_bad = bad_nsubsets_given(
            rows, pat.arity, cons, phi.matrix, early
        )
    holds = bad == 0
    counterexample = None if holds else tuple(int(x) for x in first_bad)
    return VerifyReport(holds, counterexample, int(checked))


def count_bad_subsets(phi: PairColoring, n: int, pat: TuplePattern) -> int:
    """Number of n-subsets without a good tuple (full exhaustive count)."""
    checked, bad, _ = bad_nsubsets_exhaustive(
        phi.D, n, pat.arity, pat.constraint_array(), phi.matrix, False
    )
    return int(bad)


# ---------------------------------------------------------------------------
# Restart search

@dataclass(frozen=True)
class SearchConfig:
    max_restarts: int
    verify_mode: VerifyMode = Exhaustive()
    rng_seed: int = 0
    max_subsets: int = 10**6

    def __post_init__(self) -> None:
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be >= 1")


@dataclass(frozen=True)
class SearchFailure:
    """Search exhausted its restarts.  Carries the best attempt: the coloring
    with the fewest bad n-subsets, for desk-scale experiments at parameters
    where no satisfying coloring exists."""

    restarts: int
    best_seed: int
    best_bad_count: int
    best_counterexample: tuple[int, ...] | None
    best_coloring: PairColoring = field(repr=False)


def derive_seed(base: int, index: int, stream: int = 0) -> int:
    """Per-restart 64-bit seed derived from (base, index); stable forever."""
    ss = np.random.SeedSequence([int(base) & 0xFFFFFFFFFFFFFFFF, int(index), int(stream)])
    return int(ss.generate_state(1, np.uint64)[0])


def search_coloring(D: int, n: int, pat: TuplePattern, cfg: SearchConfig):
    """Draw seeded random colorings until one satisfies the universal
    good-tuple property; returns the first hit (seed recorded on it) or a
    SearchFailure with the fewest-counterexample attempt."""
    if n < pat.arity:
        raise ValueError(f"n={n} must be >= pattern arity {pat.arity}")
    cons = pat.constraint_array()
    best_bad = None
    best_seed = 0
    best_first = None
    best_phi = None
    for i in range(cfg.max_restarts):
        seed_i = derive_seed(cfg.rng_seed, i)
        phi = random_coloring(D, seed_i)
        if isinstance(cfg.verify_mode, Exhaustive):
            total = comb(D, n)
            if total > cfg.max_subsets:
                raise BudgetExceededError(
                    f"C({D},{n})={total} exceeds the exhaustive budget {cfg.max_subsets}"
                )
            checked, bad, first_bad = bad_nsubsets_exhaustive(
                D, n, pat.arity, cons, phi.matrix, False
            )
        else:
            rows = _sample_subsets(D, n, cfg.verify_mode.count, derive_seed(cfg.rng_seed, i, 1))
            checked, bad, first_bad = bad_nsubsets_given(
                rows, pat.arity, cons, phi.matrix, False
            )
        if bad == 0:
            return phi
        if best_bad is None or bad < best_bad:
            best_bad = int(bad)
            best_seed = seed_i
            best_first = tuple(int(x) for x in first_bad)
            best_phi = phi
    return SearchFailure(cfg.max_restarts, best_seed, best_bad, best_first, best_phi)


# ---------------------------------------------------------------------------
# File format: header "format=1 D=<int> seed=<hex|none>", then the upper
# triangle as rows of R/B characters (row i covers pairs (i, i+1..D-1)).

def coloring_to_text(phi: PairColoring) -> str:
    seed = f"0x{phi.seed & 0xFFFFFFFFFFFFFFFF:016x}" if phi.seed is not None else "none"
    lines = [f"format=1 D={phi.D} seed={seed}"]
    for i in range(phi.D - 1):
        lines.append("".join(_COLOR_CHAR[int(c)] for c in phi.matrix[i, i + 1 :]))
    return "\n".join(lines) + "\n"


def coloring_from_text(text: str) -> PairColoring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(
        tok.split("=", 1) for tok in lines[0].split() if "=" in tok
    )
    D = int(header["D"])
    seed_tok = header.get("seed", "none")
    seed = None if seed_tok == "none" else int(seed_tok, 16)
    rows = lines[1:]
    if len(rows) != D - 1:
        raise ValueError(f"expected {D - 1} rows, got {len(rows)}")
    m = np.zeros((D, D), np.uint8)
    for i, row in enumerate(rows):
        if len(row) != D - 1 - i:
            raise ValueError(f"row {i} must have {D - 1 - i} colors, got {len(row)}")
        for off, ch in enumerate(row):
            j = i + 1 + off
            m[i, j] = m[j, i] = _CHAR_COLOR[ch]
    return PairColoring(D, m, seed)


def save_coloring(phi: PairColoring, path) -> None:
    with open(path, "w") as fh:
        fh.write(coloring_to_text(phi))


def load_coloring(path) -> PairColoring:
    with open(path) as fh:
        return coloring_from_text(fh.read())
